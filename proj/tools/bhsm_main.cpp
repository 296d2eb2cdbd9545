// Command-line front end. Talks to the library exclusively through the C API.
#include <cmath>
#include <cstdio>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhsm/bhsm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct ScenarioDeleter {
  void operator()(bhsm_scenario* p) const { bhsm_scenario_free(p); }
};
struct TraceDeleter {
  void operator()(bhsm_trace* p) const { bhsm_trace_free(p); }
};
struct MetricsDeleter {
  void operator()(bhsm_metrics* p) const { bhsm_metrics_free(p); }
};
struct ReportDeleter {
  void operator()(bhsm_verify_report* p) const { bhsm_verify_report_free(p); }
};
using ScenarioPtr = std::unique_ptr<bhsm_scenario, ScenarioDeleter>;
using TracePtr = std::unique_ptr<bhsm_trace, TraceDeleter>;
using MetricsPtr = std::unique_ptr<bhsm_metrics, MetricsDeleter>;
using ReportPtr = std::unique_ptr<bhsm_verify_report, ReportDeleter>;

std::string take_json(bhsm_status (*render)(const bhsm_metrics*, char**), const bhsm_metrics* m) {
  char* raw = nullptr;
  if (render(m, &raw) != BHSM_OK) return "{}";
  std::string out(raw);
  bhsm_string_free(raw);
  return out;
}

int exit_code_for(bhsm_status status) {
  switch (status) {
    case BHSM_OK:
      return kExitOk;
    case BHSM_ERR_CONFIG:
    case BHSM_ERR_IO:
    case BHSM_ERR_PARAM:
    case BHSM_ERR_INVALID_HANDLE:
      return kExitUsage;
    default:
      return kExitCheckFailed;
  }
}

int fail(bhsm_status status) {
  std::fprintf(stderr, "error: %s\n", bhsm_last_error());
  return exit_code_for(status);
}

bool parse_window(const std::string& text, bhsm_run_options& options) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    options.window_t0 = std::stod(text.substr(0, colon));
    options.window_t1 = std::stod(text.substr(colon + 1));
  } catch (...) {
    return false;
  }
  return true;
}

int run_simulate(const std::string& scenario_path, const std::string& out_trace,
                 const std::string& out_metrics, const bhsm_run_options& options) {
  bhsm_scenario* raw_scenario = nullptr;
  if (auto s = bhsm_scenario_load(scenario_path.c_str(), &raw_scenario); s != BHSM_OK) return fail(s);
  ScenarioPtr scenario(raw_scenario);

  bhsm_trace* raw_trace = nullptr;
  bhsm_metrics* raw_metrics = nullptr;
  if (auto s = bhsm_simulate_with_metrics(scenario.get(), &options, &raw_trace, &raw_metrics); s != BHSM_OK) {
    return fail(s);
  }
  TracePtr trace(raw_trace);
  MetricsPtr metrics(raw_metrics);

  if (!out_trace.empty()) {
    if (auto s = bhsm_trace_write_csv(trace.get(), out_trace.c_str()); s != BHSM_OK) return fail(s);
  }
  if (!out_metrics.empty()) {
    if (auto s = bhsm_metrics_write_json(metrics.get(), out_metrics.c_str()); s != BHSM_OK) return fail(s);
  } else {
    std::printf("%s\n", take_json(bhsm_metrics_to_json, metrics.get()).c_str());
  }
  return kExitOk;
}

int run_verify(const std::string& params_path, std::uint64_t samples, std::uint64_t seed) {
  bhsm_verify_report* raw = nullptr;
  if (auto s = bhsm_verify_file(params_path.c_str(), samples, seed, &raw); s != BHSM_OK) return fail(s);
  ReportPtr report(raw);
  char* json = nullptr;
  if (auto s = bhsm_verify_report_to_json(report.get(), &json); s != BHSM_OK) return fail(s);
  std::printf("%s\n", json);
  bhsm_string_free(json);
  return bhsm_verify_report_passed(report.get()) ? kExitOk : kExitCheckFailed;
}

int run_accuracy(const std::string& scenario_path, const std::vector<double>& taus,
                 const std::string& out_metrics, const bhsm_run_options& options) {
  bhsm_scenario* raw_scenario = nullptr;
  if (auto s = bhsm_scenario_load(scenario_path.c_str(), &raw_scenario); s != BHSM_OK) return fail(s);
  ScenarioPtr base(raw_scenario);
  const int r = bhsm_scenario_order(base.get());

  struct SweepResult {
    bhsm_status status = BHSM_OK;
    std::string error;
    MetricsPtr metrics;
  };

  // Each run owns its scenario clone; runs are independent.
  std::vector<std::future<SweepResult>> futures;
  for (const double tau : taus) {
    bhsm_scenario* raw_clone = nullptr;
    if (auto s = bhsm_scenario_clone(base.get(), &raw_clone); s != BHSM_OK) return fail(s);
    ScenarioPtr clone(raw_clone);
    if (auto s = bhsm_scenario_set_tau(clone.get(), tau); s != BHSM_OK) return fail(s);
    futures.push_back(std::async(std::launch::async, [scenario = std::move(clone), &options]() {
      SweepResult result;
      bhsm_metrics* raw_metrics = nullptr;
      result.status = bhsm_simulate_with_metrics(scenario.get(), &options, nullptr, &raw_metrics);
      if (result.status != BHSM_OK) {
        result.error = bhsm_last_error();
      } else {
        result.metrics.reset(raw_metrics);
      }
      return result;
    }));
  }

  std::printf("%12s", "tau");
  for (int i = 1; i <= r; ++i) std::printf("  %14s", ("lambda_" + std::to_string(i)).c_str());
  for (int i = 1; i <= r; ++i) std::printf("  %14s", ("sup|z_" + std::to_string(i) + "|").c_str());
  std::printf("\n");

  std::string json_rows;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    SweepResult result = futures[i].get();
    if (result.status != BHSM_OK) {
      std::fprintf(stderr, "error: tau = %g: %s\n", taus[i], result.error.c_str());
      return exit_code_for(result.status);
    }
    std::vector<double> lambdas(static_cast<std::size_t>(r), 0.0);
    std::vector<double> sups(static_cast<std::size_t>(r), 0.0);
    size_t n = 0;
    int present = 0;
    bhsm_metrics_get_array(result.metrics.get(), "accuracy_lambdas", lambdas.data(), lambdas.size(), &n,
                           &present);
    bhsm_metrics_get_array(result.metrics.get(), "steady_sup", sups.data(), sups.size(), &n, &present);
    std::printf("%12g", taus[i]);
    for (double v : lambdas) std::printf("  %14.6g", v);
    for (double v : sups) std::printf("  %14.6g", v);
    std::printf("\n");
    if (!json_rows.empty()) json_rows += ",\n";
    json_rows += "  {\"tau\": " + std::to_string(taus[i]) +
                 ", \"metrics\": " + take_json(bhsm_metrics_to_json, result.metrics.get()) + "}";
  }
  if (!out_metrics.empty()) {
    const std::string doc = "[\n" + json_rows + "\n]\n";
    FILE* f = std::fopen(out_metrics.c_str(), "wb");
    if (f == nullptr) {
      std::fprintf(stderr, "error: cannot open '%s' for writing\n", out_metrics.c_str());
      return kExitUsage;
    }
    std::fwrite(doc.data(), 1, doc.size(), f);
    std::fclose(f);
  }
  return kExitOk;
}

int run_report(const std::string& trace_path, const std::string& scenario_path,
               const std::string& out_metrics, const bhsm_run_options& options) {
  bhsm_trace* raw_trace = nullptr;
  if (auto s = bhsm_trace_read_csv(trace_path.c_str(), &raw_trace); s != BHSM_OK) return fail(s);
  TracePtr trace(raw_trace);

  bhsm_scenario* raw_scenario = nullptr;
  if (auto s = bhsm_scenario_load(scenario_path.c_str(), &raw_scenario); s != BHSM_OK) return fail(s);
  ScenarioPtr scenario(raw_scenario);

  bhsm_metrics* raw_metrics = nullptr;
  if (auto s = bhsm_metrics_from_trace(trace.get(), scenario.get(), &options, &raw_metrics); s != BHSM_OK) {
    return fail(s);
  }
  MetricsPtr metrics(raw_metrics);
  if (!out_metrics.empty()) {
    if (auto s = bhsm_metrics_write_json(metrics.get(), out_metrics.c_str()); s != BHSM_OK) return fail(s);
  } else {
    std::printf("%s\n", take_json(bhsm_metrics_to_json, metrics.get()).c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"barrier-gain higher-order sliding mode control toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  bhsm_run_options options = bhsm_run_options_default();
  std::string window_text;
  auto add_window_flags = [&](CLI::App* cmd) {
    cmd->add_option("--window", window_text, "metrics window as t0:t1 (default: final third of horizon)");
    cmd->add_option("--tol", options.trap_tol, "trap-check relative tolerance on V <= eta")->capture_default_str();
  };

  std::string scenario_path, trace_path, out_trace, out_metrics;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::vector<double> taus;

  auto* simulate_cmd = app.add_subcommand("simulate", "run one scenario, write trace and metrics");
  simulate_cmd->add_option("scenario", scenario_path, "scenario config file")->required();
  simulate_cmd->add_option("--out-trace", out_trace, "write the sampled trace CSV here");
  simulate_cmd->add_option("--out-metrics", out_metrics, "write the summary JSON here (default: stdout)");
  add_window_flags(simulate_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the controller/Lyapunov assumption checks");
  verify_cmd->add_option("params", scenario_path, "controller config file ([hong] section)")->required();
  verify_cmd->add_option("--samples", samples, "number of pseudo-random sample points")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "seed of the deterministic generator")->capture_default_str();

  auto* accuracy_cmd = app.add_subcommand("accuracy", "sweep sampling steps and tabulate accuracy constants");
  accuracy_cmd->add_option("scenario", scenario_path, "scenario config file")->required();
  accuracy_cmd->add_option("--taus", taus, "comma-separated sampling steps")->required()->delimiter(',');
  accuracy_cmd->add_option("--out-metrics", out_metrics, "write per-tau summaries as a JSON array");
  add_window_flags(accuracy_cmd);

  auto* report_cmd = app.add_subcommand("report", "recompute metrics from a stored trace");
  report_cmd->add_option("trace", trace_path, "trace CSV produced by simulate")->required();
  report_cmd->add_option("scenario", scenario_path, "scenario config file")->required();
  report_cmd->add_option("--out-metrics", out_metrics, "write the summary JSON here (default: stdout)");
  add_window_flags(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (!window_text.empty() && !parse_window(window_text, options)) {
    std::fprintf(stderr, "error: --window expects t0:t1, got '%s'\n", window_text.c_str());
    return kExitUsage;
  }

  if (simulate_cmd->parsed()) return run_simulate(scenario_path, out_trace, out_metrics, options);
  if (verify_cmd->parsed()) return run_verify(scenario_path, samples, seed);
  if (accuracy_cmd->parsed()) return run_accuracy(scenario_path, taus, out_metrics, options);
  if (report_cmd->parsed()) return run_report(trace_path, scenario_path, out_metrics, options);
  return kExitUsage;
}
