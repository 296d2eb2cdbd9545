#include "bhsm/bhsm.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "error.hpp"
#include "metrics.hpp"
#include "scenario_io.hpp"
#include "sim.hpp"
#include "verify.hpp"

struct bhsm_scenario {
  bhsm::Scenario value;
};
struct bhsm_trace {
  bhsm::Trace value;
};
struct bhsm_metrics {
  bhsm::SummaryMetrics value;
};
struct bhsm_verify_report {
  bhsm::VerifyReport value;
};

namespace {

thread_local std::string g_last_error;

bhsm_status set_error(bhsm_status status, const char* what) {
  g_last_error = what;
  return status;
}

bhsm_status to_status(const bhsm::Error& e) {
  using bhsm::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::Domain: return BHSM_ERR_DOMAIN;
    case ErrorKind::Parameter: return BHSM_ERR_PARAM;
    case ErrorKind::Shape: return BHSM_ERR_SHAPE;
    case ErrorKind::Config: return BHSM_ERR_CONFIG;
    case ErrorKind::Contract: return BHSM_ERR_CONTRACT;
    case ErrorKind::Divergence: return BHSM_ERR_DIVERGENCE;
    case ErrorKind::InsufficientData: return BHSM_ERR_INSUFFICIENT_DATA;
    case ErrorKind::Io: return BHSM_ERR_IO;
  }
  return BHSM_ERR_INTERNAL;
}

template <typename Fn>
bhsm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BHSM_OK;
  } catch (const bhsm::Error& e) {
    return set_error(to_status(e), e.what());
  } catch (const std::exception& e) {
    return set_error(BHSM_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(BHSM_ERR_INTERNAL, "unknown error");
  }
}

bhsm_status require_handle(const void* p, const char* what) {
  if (p == nullptr) return set_error(BHSM_ERR_INVALID_HANDLE, what);
  return BHSM_OK;
}

bhsm::MetricsOptions to_options(const bhsm_run_options* options) {
  bhsm::MetricsOptions o;
  if (options != nullptr) {
    o.window_t0 = options->window_t0;
    o.window_t1 = options->window_t1;
    o.trap_tol = options->trap_tol;
  }
  return o;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* bhsm_version(void) { return "0.1.0"; }

const char* bhsm_last_error(void) { return g_last_error.c_str(); }

void bhsm_string_free(char* s) { delete[] s; }

bhsm_status bhsm_scenario_load(const char* path, bhsm_scenario** out) {
  if (auto s = require_handle(path, "path is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] { *out = new bhsm_scenario{bhsm::load_scenario(path)}; });
}

bhsm_status bhsm_scenario_parse(const char* text, const char* name, bhsm_scenario** out) {
  if (auto s = require_handle(text, "text is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    *out = new bhsm_scenario{bhsm::parse_scenario(text, name != nullptr ? name : "<inline>")};
  });
}

bhsm_status bhsm_scenario_clone(const bhsm_scenario* scenario, bhsm_scenario** out) {
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] { *out = new bhsm_scenario{scenario->value}; });
}

void bhsm_scenario_free(bhsm_scenario* scenario) { delete scenario; }

int bhsm_scenario_order(const bhsm_scenario* scenario) {
  return scenario == nullptr ? 0 : scenario->value.order();
}

double bhsm_scenario_tau(const bhsm_scenario* scenario) {
  return scenario == nullptr ? std::numeric_limits<double>::quiet_NaN() : scenario->value.tau;
}

double bhsm_scenario_horizon(const bhsm_scenario* scenario) {
  return scenario == nullptr ? std::numeric_limits<double>::quiet_NaN() : scenario->value.horizon;
}

bhsm_status bhsm_scenario_set_tau(bhsm_scenario* scenario, double tau) {
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    bhsm::Scenario candidate = scenario->value;
    candidate.tau = tau;
    candidate.validate();
    scenario->value.tau = tau;
  });
}

bhsm_status bhsm_scenario_set_record_stride(bhsm_scenario* scenario, uint32_t stride) {
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    bhsm::Scenario candidate = scenario->value;
    candidate.record_stride = stride;
    candidate.validate();
    scenario->value.record_stride = stride;
  });
}

bhsm_run_options bhsm_run_options_default(void) {
  bhsm_run_options o;
  o.window_t0 = std::numeric_limits<double>::quiet_NaN();
  o.window_t1 = std::numeric_limits<double>::quiet_NaN();
  o.trap_tol = 1e-3;
  return o;
}

bhsm_status bhsm_simulate(const bhsm_scenario* scenario, bhsm_trace** out_trace) {
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out_trace, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] { *out_trace = new bhsm_trace{bhsm::simulate(scenario->value)}; });
}

bhsm_status bhsm_simulate_with_metrics(const bhsm_scenario* scenario, const bhsm_run_options* options,
                                       bhsm_trace** out_trace, bhsm_metrics** out_metrics) {
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    auto [trace, metrics] = bhsm::simulate_with_metrics(scenario->value, to_options(options));
    if (out_trace != nullptr) *out_trace = new bhsm_trace{std::move(trace)};
    if (out_metrics != nullptr) *out_metrics = new bhsm_metrics{std::move(metrics)};
  });
}

void bhsm_trace_free(bhsm_trace* trace) { delete trace; }

size_t bhsm_trace_size(const bhsm_trace* trace) { return trace == nullptr ? 0 : trace->value.size(); }

int bhsm_trace_order(const bhsm_trace* trace) { return trace == nullptr ? 0 : trace->value.r; }

double bhsm_trace_latch_time(const bhsm_trace* trace) {
  if (trace == nullptr || !trace->value.latch_time) return std::numeric_limits<double>::quiet_NaN();
  return *trace->value.latch_time;
}

uint64_t bhsm_trace_clamp_events(const bhsm_trace* trace) {
  return trace == nullptr ? 0 : trace->value.clamp_events;
}

bhsm_status bhsm_trace_row(const bhsm_trace* trace, size_t index, double* t, double* z, double* u, double* V,
                           double* eta, double* phi_hat) {
  if (auto s = require_handle(trace, "trace handle is null"); s != BHSM_OK) return s;
  if (index >= trace->value.size()) {
    return set_error(BHSM_ERR_PARAM, "trace row index out of range");
  }
  const auto& tr = trace->value;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (t != nullptr) *t = tr.times[index];
  if (z != nullptr) {
    const auto zi = tr.state(index);
    std::memcpy(z, zi.data(), zi.size() * sizeof(double));
  }
  if (u != nullptr) *u = tr.controls[index];
  if (V != nullptr) *V = tr.V_vals[index];
  if (eta != nullptr) *eta = tr.has_schedule_columns() ? tr.eta_vals[index] : nan;
  if (phi_hat != nullptr) *phi_hat = tr.has_schedule_columns() ? tr.phi_hat_vals[index] : nan;
  g_last_error.clear();
  return BHSM_OK;
}

bhsm_status bhsm_trace_write_csv(const bhsm_trace* trace, const char* path) {
  if (auto s = require_handle(trace, "trace handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(path, "path is null"); s != BHSM_OK) return s;
  return guarded([&] { bhsm::write_trace_csv(trace->value, path); });
}

bhsm_status bhsm_trace_read_csv(const char* path, bhsm_trace** out) {
  if (auto s = require_handle(path, "path is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] { *out = new bhsm_trace{bhsm::read_trace_csv(path)}; });
}

void bhsm_metrics_free(bhsm_metrics* metrics) { delete metrics; }

bhsm_status bhsm_metrics_from_trace(const bhsm_trace* trace, const bhsm_scenario* scenario,
                                    const bhsm_run_options* options, bhsm_metrics** out) {
  if (auto s = require_handle(trace, "trace handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(scenario, "scenario handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    *out = new bhsm_metrics{bhsm::compute_metrics(trace->value, scenario->value, to_options(options))};
  });
}

bhsm_status bhsm_metrics_get(const bhsm_metrics* metrics, const char* field, double* value, int* present) {
  if (auto s = require_handle(metrics, "metrics handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(field, "field name is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(value, "value pointer is null"); s != BHSM_OK) return s;
  const auto& m = metrics->value;
  const std::string_view name(field);
  bool has = true;
  double v = 0.0;
  if (name == "latch_time") {
    has = m.latch_time.has_value();
    v = has ? *m.latch_time : 0.0;
  } else if (name == "trap_violations") {
    has = m.trap_violations.has_value();
    v = has ? static_cast<double>(*m.trap_violations) : 0.0;
  } else if (name == "max_trap_excess") {
    has = m.max_trap_excess.has_value();
    v = has ? *m.max_trap_excess : 0.0;
  } else if (name == "gain_sup_late") {
    v = m.gain_sup_late;
  } else if (name == "gain_bound") {
    has = m.gain_bound.has_value();
    v = has ? *m.gain_bound : 0.0;
  } else if (name == "phi_bar_bar") {
    has = m.phi_bar_bar.has_value();
    v = has ? *m.phi_bar_bar : 0.0;
  } else if (name == "h_m") {
    has = m.h_m.has_value();
    v = has ? *m.h_m : 0.0;
  } else if (name == "clamp_events") {
    v = static_cast<double>(m.clamp_events);
  } else {
    return set_error(BHSM_ERR_PARAM, "unknown metrics field");
  }
  *value = has ? v : std::numeric_limits<double>::quiet_NaN();
  if (present != nullptr) *present = has ? 1 : 0;
  g_last_error.clear();
  return BHSM_OK;
}

bhsm_status bhsm_metrics_get_array(const bhsm_metrics* metrics, const char* field, double* values,
                                   size_t capacity, size_t* size, int* present) {
  if (auto s = require_handle(metrics, "metrics handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(field, "field name is null"); s != BHSM_OK) return s;
  const auto& m = metrics->value;
  const std::string_view name(field);
  const std::vector<double>* src = nullptr;
  bool has = true;
  if (name == "steady_sup") {
    src = &m.steady_sup;
  } else if (name == "accuracy_lambdas") {
    has = m.accuracy_lambdas.has_value();
    src = has ? &*m.accuracy_lambdas : nullptr;
  } else {
    return set_error(BHSM_ERR_PARAM, "unknown metrics array field");
  }
  const size_t n = src != nullptr ? src->size() : 0;
  if (size != nullptr) *size = n;
  if (present != nullptr) *present = has ? 1 : 0;
  if (src != nullptr && values != nullptr) {
    if (capacity < n) return set_error(BHSM_ERR_PARAM, "metrics array capacity too small");
    std::memcpy(values, src->data(), n * sizeof(double));
  }
  g_last_error.clear();
  return BHSM_OK;
}

bhsm_status bhsm_metrics_to_json(const bhsm_metrics* metrics, char** out) {
  if (auto s = require_handle(metrics, "metrics handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output pointer is null"); s != BHSM_OK) return s;
  return guarded([&] { *out = dup_string(bhsm::metrics_to_json(metrics->value)); });
}

bhsm_status bhsm_metrics_write_json(const bhsm_metrics* metrics, const char* path) {
  if (auto s = require_handle(metrics, "metrics handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(path, "path is null"); s != BHSM_OK) return s;
  return guarded([&] { bhsm::write_metrics_json(metrics->value, path); });
}

bhsm_status bhsm_verify_file(const char* path, uint64_t samples, uint64_t seed, bhsm_verify_report** out) {
  if (auto s = require_handle(path, "path is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output handle is null"); s != BHSM_OK) return s;
  return guarded([&] {
    const bhsm::HongParams params = bhsm::load_hong_params(path);
    *out = new bhsm_verify_report{bhsm::verify_assumptions(params, samples, seed)};
  });
}

void bhsm_verify_report_free(bhsm_verify_report* report) { delete report; }

int bhsm_verify_report_passed(const bhsm_verify_report* report) {
  return report != nullptr && report->value.passed() ? 1 : 0;
}

bhsm_status bhsm_verify_report_to_json(const bhsm_verify_report* report, char** out) {
  if (auto s = require_handle(report, "report handle is null"); s != BHSM_OK) return s;
  if (auto s = require_handle(out, "output pointer is null"); s != BHSM_OK) return s;
  return guarded([&] { *out = dup_string(bhsm::verify_report_to_json(report->value)); });
}

}  // extern "C"
