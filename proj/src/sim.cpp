#include "sim.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

namespace {
constexpr double kDivergenceLimit = 1e12;
constexpr double kMaxSteps = 1e8;
}  // namespace

void Scenario::validate() const {
  hong.validate();
  validate_mode(mode, hong);
  uncertainty.validate();
  if (z0.size() != static_cast<std::size_t>(hong.profile.r)) {
    throw Error(ErrorKind::Shape, fmt::format("scenario '{}': z0 has length {}, chain order is {}", name,
                                              z0.size(), hong.profile.r));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::Parameter, fmt::format("scenario '{}': tau must be > 0, got {}", name, tau));
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::Parameter, fmt::format("scenario '{}': horizon must be > 0, got {}", name, horizon));
  }
  if (horizon / tau > kMaxSteps) {
    throw Error(ErrorKind::Parameter,
                fmt::format("scenario '{}': horizon/tau = {:.3g} exceeds the step-count guard {:.0e}", name,
                            horizon / tau, kMaxSteps));
  }
  if (record_stride < 1) {
    throw Error(ErrorKind::Parameter, fmt::format("scenario '{}': record_stride must be >= 1", name));
  }
  const bool barrier = mode.variant == ControllerVariant::BarrierTimeVarying;
  if (barrier != schedule.has_value()) {
    throw Error(ErrorKind::Config,
                fmt::format("scenario '{}': a gain schedule must be present exactly for the barrier variant", name));
  }
  if (schedule) schedule->validate();
}

std::vector<double> chain_rhs(int r, std::span<const double> z, double phi, double gamma, double u) {
  if (z.size() != static_cast<std::size_t>(r)) {
    throw Error(ErrorKind::Shape, fmt::format("chain_rhs: state has length {}, expected {}", z.size(), r));
  }
  std::vector<double> dz(z.size());
  for (int i = 0; i + 1 < r; ++i) {
    dz[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i) + 1];
  }
  dz[static_cast<std::size_t>(r) - 1] = phi + gamma * u;
  return dz;
}

Trace simulate(const Scenario& scenario, const SampleObserver& observer) {
  scenario.validate();
  const int r = scenario.order();
  const auto n_steps = static_cast<std::size_t>(std::llround(scenario.horizon / scenario.tau));
  const bool barrier = scenario.schedule.has_value();
  const auto& bounds = scenario.uncertainty.declared_bounds;

  Trace trace;
  trace.r = r;
  const std::size_t reserve = n_steps / scenario.record_stride + 2;
  trace.times.reserve(reserve);
  trace.states.reserve(reserve * static_cast<std::size_t>(r));
  trace.controls.reserve(reserve);
  trace.V_vals.reserve(reserve);
  if (barrier) {
    trace.eta_vals.reserve(reserve);
    trace.phi_hat_vals.reserve(reserve);
  }

  GainState gain_state;
  std::vector<double> z = scenario.z0;

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * scenario.tau;

    for (double zi : z) {
      if (!std::isfinite(zi) || std::fabs(zi) > kDivergenceLimit) {
        throw DivergenceError(k, fmt::format("simulate: state diverged at step {} (t = {:.6g}): |z| = {:.3g}",
                                             k, t, std::fabs(zi)));
      }
    }

    const double V = lyapunov_value(scenario.hong, z);
    double eta_t = std::numeric_limits<double>::quiet_NaN();
    double phi_hat = std::numeric_limits<double>::quiet_NaN();
    if (barrier) {
      eta_t = envelope(*scenario.schedule, t);
      phi_hat = update_gain(*scenario.schedule, gain_state, t, V);
    }
    const double u = control(scenario.mode, scenario.hong, z, phi_hat);

    if (observer) {
      observer(SimSample{k, t, z, u, V, eta_t, phi_hat});
    }
    if (k % scenario.record_stride == 0 || k == n_steps) {
      trace.times.push_back(t);
      trace.states.insert(trace.states.end(), z.begin(), z.end());
      trace.controls.push_back(u);
      trace.V_vals.push_back(V);
      if (barrier) {
        trace.eta_vals.push_back(eta_t);
        trace.phi_hat_vals.push_back(phi_hat);
      }
    }
    if (k == n_steps) break;

    const auto unc = eval_uncertainty(scenario.uncertainty, t);
    if (bounds) {
      if (std::fabs(unc.phi) > bounds->phi_bar) {
        throw Error(ErrorKind::Contract,
                    fmt::format("simulate: |phi({:.6g})| = {:.6g} violates the declared bound {}", t,
                                std::fabs(unc.phi), bounds->phi_bar));
      }
      if (unc.gamma < bounds->gamma_m || unc.gamma > bounds->gamma_M) {
        throw Error(ErrorKind::Contract,
                    fmt::format("simulate: gamma({:.6g}) = {:.6g} violates the declared bounds [{}, {}]", t,
                                unc.gamma, bounds->gamma_m, bounds->gamma_M));
      }
    }

    // Euler step with everything held over [t_k, t_k + tau).
    const double a = unc.phi + unc.gamma * u;
    for (int i = 0; i + 1 < r; ++i) {
      z[static_cast<std::size_t>(i)] += scenario.tau * z[static_cast<std::size_t>(i) + 1];
    }
    z[static_cast<std::size_t>(r) - 1] += scenario.tau * a;
  }

  trace.latch_time = gain_state.latch_time;
  trace.clamp_events = gain_state.clamp_events;
  return trace;
}

}  // namespace bhsm
