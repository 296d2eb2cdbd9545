#include "metrics.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

namespace {

// Shared sample-wise accumulation so that sim-time summaries (full-resolution
// stream) and trace-replay summaries go through identical arithmetic.
class SummaryAccumulator {
 public:
  SummaryAccumulator(int r, std::pair<double, double> window, double trap_tol, bool has_schedule)
      : r_(r), t0_(window.first), t1_(window.second), trap_tol_(trap_tol), has_schedule_(has_schedule),
        sup_z_(static_cast<std::size_t>(r), 0.0) {}

  void feed(double t, std::span<const double> z, double u, double V, double eta) {
    if (t >= t0_ && t <= t1_) {
      window_samples_ = true;
      for (int i = 0; i < r_; ++i) {
        sup_z_[static_cast<std::size_t>(i)] =
            std::max(sup_z_[static_cast<std::size_t>(i)], std::fabs(z[static_cast<std::size_t>(i)]));
      }
      sup_u_ = std::max(sup_u_, std::fabs(u));
    }
    if (has_schedule_) {
      if (!latch_time_ && V <= eta / 2.0) latch_time_ = t;
      if (latch_time_ && t > *latch_time_) {
        if (V > eta * (1.0 + trap_tol_)) ++trap_violations_;
        max_trap_excess_ = std::max(max_trap_excess_, std::max(V / eta - 1.0, 0.0));
      }
    }
  }

  bool window_hit() const { return window_samples_; }

  SummaryMetrics finalize(double tau) const {
    SummaryMetrics m;
    m.steady_sup = sup_z_;
    m.gain_sup_late = sup_u_;
    if (window_samples_) {
      std::vector<double> lambdas(static_cast<std::size_t>(r_));
      for (int i = 0; i < r_; ++i) {
        lambdas[static_cast<std::size_t>(i)] =
            sup_z_[static_cast<std::size_t>(i)] / std::pow(tau, static_cast<double>(r_ - i));
      }
      m.accuracy_lambdas = std::move(lambdas);
    }
    if (has_schedule_ && latch_time_) {
      m.latch_time = latch_time_;
      m.trap_violations = trap_violations_;
      m.max_trap_excess = max_trap_excess_;
    }
    return m;
  }

  std::optional<double> latch_time() const { return latch_time_; }

 private:
  int r_;
  double t0_, t1_, trap_tol_;
  bool has_schedule_;
  std::vector<double> sup_z_;
  double sup_u_ = 0.0;
  bool window_samples_ = false;
  std::optional<double> latch_time_;
  std::int64_t trap_violations_ = 0;
  double max_trap_excess_ = 0.0;
};

void attach_gain_envelope(SummaryMetrics& m, const GainEnvelopeResult& env) {
  m.gain_bound = env.gain_bound;
  m.phi_bar_bar = env.phi_bar_bar;
  m.h_m = env.h_m;
  m.h_m_unbounded = env.h_m_unbounded;
}

double eta_at(const Trace& trace, const GainSchedule& schedule, std::size_t i) {
  return trace.has_schedule_columns() ? trace.eta_vals[i] : envelope(schedule, trace.times[i]);
}

}  // namespace

std::pair<double, double> resolve_window(const MetricsOptions& options, double horizon) {
  double t0 = options.window_t0;
  double t1 = options.window_t1;
  if (std::isnan(t0)) t0 = 2.0 / 3.0 * horizon;
  if (std::isnan(t1)) t1 = horizon;
  if (!(t0 >= 0.0) || !(t1 > t0)) {
    throw Error(ErrorKind::Parameter, fmt::format("metrics window [{}, {}] is empty or negative", t0, t1));
  }
  return {t0, t1};
}

SummaryMetrics accuracy_metrics(const Trace& trace, double tau, std::pair<double, double> window) {
  if (!(window.second > window.first)) {
    throw Error(ErrorKind::Parameter,
                fmt::format("accuracy_metrics: window [{}, {}] is empty", window.first, window.second));
  }
  SummaryAccumulator acc(trace.r, window, 0.0, false);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    acc.feed(trace.times[i], trace.state(i), trace.controls[i], trace.V_vals[i], 0.0);
  }
  if (!acc.window_hit()) {
    throw Error(ErrorKind::Parameter,
                fmt::format("accuracy_metrics: no trace samples in window [{}, {}]", window.first, window.second));
  }
  return acc.finalize(tau);
}

std::pair<std::int64_t, double> trap_check(const Trace& trace, const GainSchedule& schedule, double tol) {
  if (!trace.latch_time) {
    throw Error(ErrorKind::Contract, "trap_check: trace has no latch time");
  }
  const double latch = *trace.latch_time;
  std::int64_t violations = 0;
  double max_excess = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = trace.times[i];
    if (t <= latch) continue;
    const double eta = eta_at(trace, schedule, i);
    const double V = trace.V_vals[i];
    if (V > eta * (1.0 + tol)) ++violations;
    max_excess = std::max(max_excess, std::max(V / eta - 1.0, 0.0));
  }
  return {violations, max_excess};
}

std::pair<double, bool> h_m_closed_form(const GainFunction& g, double gamma_m) {
  const double slope0 = gamma_m * g.c0 - 1.0;  // d/dx of x*(gamma_m g(x) - 1) at x = 0
  if (g.kind == GainFunction::Kind::Constant || g.c1 == 0.0) {
    if (slope0 >= 0.0) return {0.0, false};
    return {-std::numeric_limits<double>::infinity(), true};
  }
  if (slope0 >= 0.0) return {0.0, false};
  // Quadratic gamma_m c1 x^2 + slope0 x, interior minimum at x* = -slope0 / (2 gamma_m c1).
  return {-slope0 * slope0 / (4.0 * gamma_m * g.c1), false};
}

GainEnvelopeResult gain_envelope(const Trace& trace, const ControllerMode& mode, const HongParams& params,
                                 const DeclaredBounds& bounds, std::pair<double, double> window) {
  GainEnvelopeResult out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = trace.times[i];
    if (t >= window.first && t <= window.second) {
      out.gain_sup_late = std::max(out.gain_sup_late, std::fabs(trace.controls[i]));
    }
  }
  if (mode.variant != ControllerVariant::BarrierTimeVarying) {
    return out;
  }
  const auto [hm, unbounded] = h_m_closed_form(mode.g, bounds.gamma_m);
  out.h_m_unbounded = unbounded;
  if (unbounded) {
    return out;
  }
  out.h_m = hm;
  const double phi_bar_bar = (bounds.phi_bar - hm) / (mode.k * bounds.gamma_m);
  out.phi_bar_bar = phi_bar_bar;
  const double lr = params.gains.back();
  out.gain_bound = mode.g(lr) * lr + mode.k * std::max(1.0, phi_bar_bar);
  return out;
}

std::pair<double, double> fit_decay(const Trace& trace, std::pair<double, double> window) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const double t0 = trace.times[i];
    const double t1 = trace.times[i + 1];
    if (t0 < window.first || t1 > window.second) continue;
    const double dV = trace.V_vals[i + 1] - trace.V_vals[i];
    const double V = trace.V_vals[i];
    if (!(dV < 0.0) || !(V > 0.0)) continue;
    const double x = std::log(V);
    const double y = std::log(-dV / (t1 - t0));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 10) {
    throw Error(ErrorKind::InsufficientData,
                fmt::format("fit_decay: only {} usable decreasing samples in window, need >= 10", n));
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) {
    throw Error(ErrorKind::InsufficientData, "fit_decay: degenerate sample spread");
  }
  const double alpha = (dn * sxy - sx * sy) / denom;
  const double c = std::exp((sy - alpha * sx) / dn);
  return {c, alpha};
}

SummaryMetrics compute_metrics(const Trace& trace, const Scenario& scenario, const MetricsOptions& options) {
  const auto window = resolve_window(options, scenario.horizon);
  const bool has_schedule = scenario.schedule.has_value();
  SummaryAccumulator acc(trace.r, window, options.trap_tol, has_schedule);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double eta = has_schedule ? eta_at(trace, *scenario.schedule, i) : 0.0;
    acc.feed(trace.times[i], trace.state(i), trace.controls[i], trace.V_vals[i], eta);
  }
  SummaryMetrics m = acc.finalize(scenario.tau);

  if (has_schedule) {
    if (trace.latch_time) {
      m.latch_time = trace.latch_time;  // prefer the exact value carried by the run
    }
    // Clamp count: carried by fresh traces; rederived for stored ones.
    if (trace.latch_time || trace.clamp_events > 0) {
      m.clamp_events = trace.clamp_events;
    } else if (m.latch_time) {
      const double delta = scenario.schedule->clamp_delta;
      std::uint64_t clamps = 0;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.times[i] < *m.latch_time) continue;
        if (trace.V_vals[i] > (1.0 - delta) * eta_at(trace, *scenario.schedule, i)) ++clamps;
      }
      m.clamp_events = clamps;
    }
  }

  if (scenario.uncertainty.declared_bounds) {
    attach_gain_envelope(m, gain_envelope(trace, scenario.mode, scenario.hong,
                                          *scenario.uncertainty.declared_bounds, window));
  }
  return m;
}

std::pair<Trace, SummaryMetrics> simulate_with_metrics(const Scenario& scenario, const MetricsOptions& options) {
  const auto window = resolve_window(options, scenario.horizon);
  const bool has_schedule = scenario.schedule.has_value();
  SummaryAccumulator acc(scenario.order(), window, options.trap_tol, has_schedule);
  Trace trace = simulate(scenario, [&](const SimSample& s) { acc.feed(s.t, s.z, s.u, s.V, s.eta); });
  SummaryMetrics m = acc.finalize(scenario.tau);
  if (has_schedule && trace.latch_time) {
    m.latch_time = trace.latch_time;
  }
  m.clamp_events = trace.clamp_events;
  if (scenario.uncertainty.declared_bounds) {
    attach_gain_envelope(m, gain_envelope(trace, scenario.mode, scenario.hong,
                                          *scenario.uncertainty.declared_bounds, window));
  }
  return {std::move(trace), std::move(m)};
}

}  // namespace bhsm
