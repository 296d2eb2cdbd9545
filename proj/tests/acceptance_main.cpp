// Acceptance suite: runs every headline requirement end-to-end and prints one
// pass/fail line per criterion. Exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <filesystem>
#include <string>
#include <vector>

#include "error.hpp"
#include "metrics.hpp"
#include "scenario_io.hpp"
#include "sim.hpp"
#include "support.hpp"
#include "verify.hpp"

using namespace bhsm;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const char* name, bool passed, const std::string& details, double elapsed) {
  if (!passed) ++g_failures;
  std::printf("[%s] criterion %d: %s — %s (%.2fs)\n", passed ? "PASS" : "FAIL", id, name, details.c_str(),
              elapsed);
  std::fflush(stdout);
}

Scenario fixed_gain_scenario(double tau) {
  Scenario s;
  s.name = "fixed_gain";
  s.hong = support::third_order_params();
  s.mode.variant = ControllerVariant::FixedGainRobust;
  s.mode.phi_bar = 25.0;
  s.mode.gamma_m = 1.0;
  s.uncertainty = benchmark_uncertainty();
  s.z0 = {4.0, 4.0, -4.0};
  s.tau = tau;
  s.horizon = 15.0;
  s.record_stride = 1000;
  return s;
}

Scenario barrier_scenario(double tau, std::uint32_t stride) {
  Scenario s;
  s.name = "barrier";
  s.hong = support::third_order_params();
  s.mode.variant = ControllerVariant::BarrierTimeVarying;
  s.mode.k = 1.0;
  s.mode.g = GainFunction{GainFunction::Kind::Constant, 1.0, 0.0};
  GainSchedule sched;
  sched.epsilon = 1.0;
  sched.decay_rate = 0.2;
  sched.k = s.mode.k;
  sched.g = s.mode.g;
  s.schedule = sched;
  s.uncertainty = benchmark_uncertainty();
  s.z0 = {4.0, 4.0, -4.0};
  s.tau = tau;
  s.horizon = 15.0;
  s.record_stride = stride;
  return s;
}

void criterion_1_closed_form() {
  Timer timer;
  const HongParams params = support::third_order_params();
  SplitMix64 rng(101);
  double worst_ref = 0.0;
  double worst_quad = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto z = support::random_state(rng, 3);
    const double V = lyapunov_value(params, z);
    worst_ref = std::max(worst_ref, support::rel_err(V, support::lyapunov3_reference(z, 1.0, 2.0)));
    worst_quad = std::max(worst_quad, support::rel_err(V, lyapunov_value_by_quadrature(params, z)));
  }
  const double elapsed = timer.seconds();
  const bool passed = worst_ref <= 1e-12 && worst_quad <= 1e-8 && elapsed < 5.0;
  report(1, "closed-form Lyapunov equivalence",
         passed,
         fmt::format("explicit-form residual {:.2e} (tol 1e-12), quadrature residual {:.2e} (tol 1e-8), "
                     "1000 points",
                     worst_ref, worst_quad),
         elapsed);
}

void criterion_2_homogeneity() {
  Timer timer;
  const HongParams params = support::third_order_params();
  const double degree = params.profile.betas[0] + 1.0;
  SplitMix64 rng(102);
  double worst_V = 0.0;
  double worst_psi = 0.0;
  std::uint64_t sign_mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto z = support::random_state(rng, 3);
    const double eps = rng.uniform(0.5, 2.0);
    const auto dz = apply_dilation(params.profile, eps, z);
    worst_V = std::max(worst_V, support::rel_err(lyapunov_value(params, dz),
                                                 std::pow(eps, degree) * lyapunov_value(params, z)));
    if (nominal_control(params, NominalMode::Sign, dz) != nominal_control(params, NominalMode::Sign, z)) {
      ++sign_mismatches;
    }
    worst_psi = std::max(worst_psi, support::psi3_residual(z, switching_function(params, z),
                                                           support::psi3_reference(z, 1.0, 2.0), 1.0, 2.0));
  }
  const double elapsed = timer.seconds();
  const bool passed = worst_V <= 1e-9 && sign_mismatches == 0 && worst_psi <= 1e-12 && elapsed < 10.0;
  report(2, "homogeneity suite", passed,
         fmt::format("V-dilation residual {:.2e} (tol 1e-9), sign-feedback mismatches {}, "
                     "switching-function residual {:.2e} (tol 1e-12), 10000 points each",
                     worst_V, sign_mismatches, worst_psi),
         elapsed);
}

void criterion_3_descent() {
  Timer timer;
  const HongParams params = support::third_order_params();
  SplitMix64 rng(103);
  double worst = -1e300;
  std::uint64_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    auto z = support::random_state(rng, 3);
    if (z[0] == 0.0 && z[1] == 0.0 && z[2] == 0.0) z[0] = 1.0;
    const double u0 = nominal_control(params, NominalMode::Sign, z);
    const double dVr = lyapunov_gradient(params, z).back();
    const double allowance = 1e-9 * (1.0 + std::fabs(u0) * std::fabs(dVr));
    const double value = u0 * dVr;
    worst = std::max(worst, value - allowance);
    if (value > allowance) ++violations;
  }
  const double elapsed = timer.seconds();
  const bool passed = violations == 0 && elapsed < 30.0;
  report(3, "descent condition with finite-difference gradients", passed,
         fmt::format("violations {} of 10000, worst margin {:.2e}", violations, worst), elapsed);
}

void criterion_4_fixed_gain_accuracy() {
  Timer timer;
  const std::vector<double> bounds{20000.0, 500.0, 200.0};
  bool converged = true;
  bool lambdas_ok = true;
  std::string details;
  for (const double tau : {1e-4, 1e-5}) {
    const Scenario s = fixed_gain_scenario(tau);
    MetricsOptions opts;  // default window: final third = [10, 15]
    const auto [trace, metrics] = simulate_with_metrics(s, opts);
    const double sup_inf = std::max({metrics.steady_sup[0], metrics.steady_sup[1], metrics.steady_sup[2]});
    if (!(sup_inf < 0.1)) converged = false;
    const auto& lambdas = *metrics.accuracy_lambdas;
    for (int i = 0; i < 3; ++i) {
      if (!(lambdas[static_cast<std::size_t>(i)] <= bounds[static_cast<std::size_t>(i)])) lambdas_ok = false;
    }
    details += fmt::format("tau={:.0e}: lambda=({:.0f}, {:.1f}, {:.1f}) vs bounds (20000, 500, 200); ", tau,
                           lambdas[0], lambdas[1], lambdas[2]);
  }
  const double elapsed = timer.seconds();
  const bool passed = converged && lambdas_ok && elapsed < 120.0;
  report(4, "fixed-gain benchmark accuracy constants", passed,
         details + (converged ? "converged by t=10" : "NOT converged by t=10"), elapsed);
}

void criterion_5_barrier_trap() {
  Timer timer;
  const Scenario s = barrier_scenario(1e-4, 100);
  MetricsOptions opts;
  opts.trap_tol = 1e-3;
  const auto [trace, metrics] = simulate_with_metrics(s, opts);

  const bool latched = metrics.latch_time.has_value() && std::isfinite(*metrics.latch_time);
  bool ramp_ok = true;
  if (latched) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (trace.times[i] < *trace.latch_time && trace.phi_hat_vals[i] != trace.times[i]) ramp_ok = false;
    }
  }
  const bool trap_ok = metrics.trap_violations.has_value() && *metrics.trap_violations == 0;
  const double elapsed = timer.seconds();
  const bool passed = latched && ramp_ok && trap_ok && elapsed < 60.0;
  report(5, "barrier-gain benchmark trap invariance", passed,
         fmt::format("latch_time={}, pre-latch ramp identity {}, trap violations {} (tol 1e-3), "
                     "max excess {:.2e}",
                     latched ? fmt::format("{:.4f}", *metrics.latch_time) : "none", ramp_ok ? "ok" : "BROKEN",
                     metrics.trap_violations ? std::to_string(*metrics.trap_violations) : "n/a",
                     metrics.max_trap_excess.value_or(0.0)),
         elapsed);
}

void criterion_6_gain_bounds() {
  Timer timer;
  // Adaptive run: the Lemma-level bound with the declared benchmark bounds.
  const Scenario barrier = barrier_scenario(1e-4, 1000);
  const auto [trace, metrics] = simulate_with_metrics(barrier, MetricsOptions{});
  const bool phi_ok = metrics.phi_bar_bar.has_value() && *metrics.phi_bar_bar == 25.0;
  const bool sup_ok = metrics.gain_sup_late <= (5.0 + 25.0) * 1.05;

  // Fixed-gain run: |u| is exactly (l3 + phi_bar)/gamma_m away from switching-function zeros.
  const Scenario fixed = fixed_gain_scenario(1e-4);
  std::uint64_t off_level = 0;
  std::uint64_t zeros = 0;
  simulate(fixed, [&](const SimSample& sample) {
    if (sample.u == 0.0) {
      ++zeros;
    } else if (std::fabs(sample.u) != 30.0) {
      ++off_level;
    }
  });
  const double elapsed = timer.seconds();
  const bool passed = phi_ok && sup_ok && off_level == 0 && elapsed < 120.0;
  report(6, "gain non-overestimation", passed,
         fmt::format("phi_bar_bar={} (want 25), sup|u| over [10,15] = {:.4f} <= 31.5: {}, fixed-gain "
                     "off-level samples {} (sgn=0 samples: {})",
                     metrics.phi_bar_bar ? fmt::format("{:g}", *metrics.phi_bar_bar) : "n/a",
                     metrics.gain_sup_late, sup_ok ? "yes" : "NO", off_level, zeros),
         elapsed);
}

void criterion_7_integrator_order() {
  Timer timer;
  Scenario base;
  base.name = "order";
  base.hong.profile = make_profile(3, -0.2, 1.0);
  base.hong.gains = {1.0, 2.0, 5.0};
  base.mode.variant = ControllerVariant::NominalContinuous;
  base.z0 = {1.0, 1.0, 1.0};
  base.horizon = 1.0;
  base.record_stride = 1;

  auto run = [&](double tau) {
    Scenario s = base;
    s.tau = tau;
    return simulate(s);
  };
  auto sup_diff = [](const Trace& coarse, const Trace& fine) {
    double m = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const auto zc = coarse.state(k);
      const auto zf = fine.state(2 * k);
      for (std::size_t i = 0; i < 3; ++i) m = std::max(m, std::fabs(zc[i] - zf[i]));
    }
    return m;
  };

  bool passed = true;
  std::string details;
  for (const double tau : {1e-2, 1e-3, 1e-4}) {
    const Trace a = run(tau);
    const Trace b = run(tau / 2.0);
    const Trace c = run(tau / 4.0);
    const double ratio = sup_diff(a, b) / sup_diff(b, c);
    if (!(ratio >= 1.5 && ratio <= 3.0)) passed = false;
    details += fmt::format("tau={:.0e}: ratio {:.3f}; ", tau, ratio);
  }
  const double elapsed = timer.seconds();
  report(7, "first-order integrator convergence", passed, details + "want [1.5, 3]", elapsed);
}

void criterion_8_decay_fit() {
  Timer timer;
  // Exact solution of dV/dt = -2 sqrt(V) from V(0) = 4, sampled at tau = 1e-4.
  Trace trace;
  trace.r = 3;
  for (double t = 0.0; t <= 1.5 + 1e-12; t += 1e-4) {
    trace.times.push_back(t);
    trace.states.insert(trace.states.end(), {0.0, 0.0, 0.0});
    trace.controls.push_back(0.0);
    const double root = 2.0 - t;
    trace.V_vals.push_back(root * root);
  }
  const auto [c_hat, alpha_hat] = fit_decay(trace, {0.0, 1.5});
  const double c_err = std::fabs(c_hat - 2.0) / 2.0;
  const double a_err = std::fabs(alpha_hat - 0.5) / 0.5;
  const double elapsed = timer.seconds();
  const bool passed = c_err <= 0.02 && a_err <= 0.02;
  report(8, "decay-rate fit oracle", passed,
         fmt::format("c_hat={:.5f} (want 2 within 2%), alpha_hat={:.5f} (want 0.5 within 2%)", c_hat,
                     alpha_hat),
         elapsed);
}

void criterion_9_determinism_persistence() {
  Timer timer;
  const Scenario s = barrier_scenario(1e-4, 1);  // full-resolution recording
  MetricsOptions opts;

  const auto [trace1, live] = simulate_with_metrics(s, opts);
  const Trace trace2 = simulate(s);
  const bool deterministic = trace1.times == trace2.times && trace1.states == trace2.states &&
                             trace1.controls == trace2.controls && trace1.V_vals == trace2.V_vals &&
                             trace1.phi_hat_vals == trace2.phi_hat_vals &&
                             trace1.latch_time == trace2.latch_time;

  const auto csv_path = (std::filesystem::temp_directory_path() / "bhsm_acceptance_trace.csv").string();
  write_trace_csv(trace1, csv_path);
  const Trace stored = read_trace_csv(csv_path);
  const SummaryMetrics replay = compute_metrics(stored, s, opts);
  std::filesystem::remove(csv_path);

  const bool fields_equal =
      live.latch_time == replay.latch_time && live.steady_sup == replay.steady_sup &&
      live.accuracy_lambdas == replay.accuracy_lambdas && live.trap_violations == replay.trap_violations &&
      live.max_trap_excess == replay.max_trap_excess && live.gain_sup_late == replay.gain_sup_late &&
      live.gain_bound == replay.gain_bound && live.phi_bar_bar == replay.phi_bar_bar &&
      live.h_m == replay.h_m && live.clamp_events == replay.clamp_events;

  const double elapsed = timer.seconds();
  const bool passed = deterministic && fields_equal;
  report(9, "determinism and persistence", passed,
         fmt::format("repeated runs bit-identical: {}; CSV round-trip metrics field-for-field: {}",
                     deterministic ? "yes" : "NO", fields_equal ? "yes" : "NO"),
         elapsed);
}

}  // namespace

int main() {
  std::printf("acceptance suite (third-order perturbed-chain benchmark)\n");
  criterion_1_closed_form();
  criterion_2_homogeneity();
  criterion_3_descent();
  criterion_4_fixed_gain_accuracy();
  criterion_5_barrier_trap();
  criterion_6_gain_bounds();
  criterion_7_integrator_order();
  criterion_8_decay_fit();
  criterion_9_determinism_persistence();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
