#ifndef BHSM_METRICS_HPP
#define BHSM_METRICS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sim.hpp"

namespace bhsm {

/// Derived diagnostics of one run. Optional members are absent when their
/// inputs (schedule, latch, declared bounds) are missing.
struct SummaryMetrics {
  std::optional<double> latch_time;
  std::vector<double> steady_sup;  // sup |z_i| over the window, r entries
  std::optional<std::vector<double>> accuracy_lambdas;
  std::optional<std::int64_t> trap_violations;
  std::optional<double> max_trap_excess;
  double gain_sup_late = 0.0;  // sup |u| over the window
  std::optional<double> gain_bound;
  std::optional<double> phi_bar_bar;
  std::optional<double> h_m;
  bool h_m_unbounded = false;
  std::uint64_t clamp_events = 0;
};

struct MetricsOptions {
  // Window for the steady-state sups; NaN means the default final third of
  // the horizon.
  double window_t0 = std::numeric_limits<double>::quiet_NaN();
  double window_t1 = std::numeric_limits<double>::quiet_NaN();
  double trap_tol = 1e-3;
};

/// Resolved [t0, t1] for a horizon under the default-final-third rule.
std::pair<double, double> resolve_window(const MetricsOptions& options, double horizon);

/// Steady-state sups and accuracy constants lambda_i = sup|z_i| / tau^{r+1-i}
/// over the given window. The window must contain at least one sample.
SummaryMetrics accuracy_metrics(const Trace& trace, double tau, std::pair<double, double> window);

/// Counts samples after the latch with V > eta*(1+tol) and the worst relative
/// excess max(V/eta - 1, 0). The trace must have a latch time.
std::pair<std::int64_t, double> trap_check(const Trace& trace, const GainSchedule& schedule, double tol);

struct GainEnvelopeResult {
  double gain_sup_late = 0.0;
  std::optional<double> gain_bound;
  std::optional<double> phi_bar_bar;
  std::optional<double> h_m;
  bool h_m_unbounded = false;
};

/// Closed-form h_m = min(0, min_{x>=0} x*(gamma_m*g(x) - 1)) for the
/// Constant/Affine family. unbounded is set when the infimum is -infinity.
std::pair<double, bool> h_m_closed_form(const GainFunction& g, double gamma_m);

/// Asymptotic control-bound diagnostics of the adaptive-gain result:
/// phi_bar_bar = (phi_bar - h_m)/(k*gamma_m) and
/// gain_bound = g(l_r)*l_r + k*max(1, phi_bar_bar), against sup|u| over the
/// window. Needs the barrier variant's k and g.
GainEnvelopeResult gain_envelope(const Trace& trace, const ControllerMode& mode, const HongParams& params,
                                 const DeclaredBounds& bounds, std::pair<double, double> window);

/// Least-squares fit of log(-dV/dt) against log(V) over window samples with
/// decreasing V; returns (c_hat, alpha_hat) for dV/dt ~ -c V^alpha. Requires
/// at least 10 usable sample pairs.
std::pair<double, double> fit_decay(const Trace& trace, std::pair<double, double> window);

/// Full summary from a stored trace. For traces loaded from CSV (no latch
/// metadata) the latch time and clamp count are rederived from the stored
/// (t, V) samples and the scenario's schedule.
SummaryMetrics compute_metrics(const Trace& trace, const Scenario& scenario, const MetricsOptions& options = {});

/// Runs the scenario once, accumulating the summary from the full-resolution
/// step stream while the returned trace is decimated per record_stride.
std::pair<Trace, SummaryMetrics> simulate_with_metrics(const Scenario& scenario,
                                                       const MetricsOptions& options = {});

}  // namespace bhsm

#endif
