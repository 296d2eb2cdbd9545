#include "lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

double lyapunov_value(const HongParams& params, std::span<const double> z) {
  if (z.size() != static_cast<std::size_t>(params.profile.r)) {
    throw Error(ErrorKind::Shape, fmt::format("lyapunov_value: state has length {}, expected {}",
                                              z.size(), params.profile.r));
  }
  const auto v = v_chain(params, z);
  double total = 0.0;
  for (int i = 0; i < params.profile.r; ++i) {
    const double beta = params.profile.betas[static_cast<std::size_t>(i)];
    const double zi = z[static_cast<std::size_t>(i)];
    const double vi = v[static_cast<std::size_t>(i)];  // v_{i-1} in 1-based terms
    const double w = (std::pow(std::fabs(zi), beta + 1.0) + beta * std::pow(std::fabs(vi), beta + 1.0)) /
                         (beta + 1.0) -
                     zi * signed_pow(vi, beta);
    total += w;
  }
  return total;
}

std::vector<double> lyapunov_gradient(const HongParams& params, std::span<const double> z) {
  const bool all_zero = std::all_of(z.begin(), z.end(), [](double x) { return x == 0.0; });
  if (all_zero) {
    throw Error(ErrorKind::Domain, "lyapunov_gradient: V is not differentiable at the origin");
  }
  std::vector<double> grad(z.size());
  std::vector<double> work(z.begin(), z.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double h = std::max(1e-7, 1e-7 * std::fabs(z[i]));
    const double zi = z[i];
    work[i] = zi + h;
    const double up = lyapunov_value(params, work);
    work[i] = zi - h;
    const double down = lyapunov_value(params, work);
    work[i] = zi;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

void GainSchedule::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::Parameter, fmt::format("gain schedule: epsilon must be > 0, got {}", epsilon));
  }
  if (!(decay_rate >= 0.0) || !std::isfinite(decay_rate)) {
    throw Error(ErrorKind::Parameter, fmt::format("gain schedule: decay rate must be >= 0, got {}", decay_rate));
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::Parameter, fmt::format("gain schedule: k must be > 0, got {}", k));
  }
  g.validate();
  if (ramp_kind == RampKind::PowerLaw && (!(ramp_exponent >= 1.0) || !std::isfinite(ramp_exponent))) {
    throw Error(ErrorKind::Parameter,
                fmt::format("gain schedule: ramp exponent must be >= 1, got {}", ramp_exponent));
  }
  if (!(clamp_delta > 0.0 && clamp_delta < 1.0)) {
    throw Error(ErrorKind::Parameter,
                fmt::format("gain schedule: clamp_delta must lie in (0, 1), got {}", clamp_delta));
  }
}

double GainSchedule::ramp(double t) const {
  return ramp_kind == RampKind::Identity ? t : std::pow(t, ramp_exponent);
}

double envelope(const GainSchedule& schedule, double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorKind::Domain, fmt::format("envelope: time must be >= 0, got {}", t));
  }
  return schedule.epsilon * std::exp(-schedule.decay_rate * t);
}

double barrier_value(double xi, double x, double clamp_delta, bool* clamped) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw Error(ErrorKind::Domain, fmt::format("barrier_value: xi must be > 0, got {}", xi));
  }
  const double hi = (1.0 - clamp_delta) * xi;
  double xc = x;
  bool did_clamp = false;
  if (xc < 0.0) {
    xc = 0.0;
    did_clamp = true;
  } else if (xc > hi) {
    xc = hi;
    did_clamp = true;
  }
  if (clamped != nullptr) *clamped = did_clamp;
  return xi / (xi - xc);
}

bool in_domain(const GainSchedule& schedule, double t, double V) {
  return V <= envelope(schedule, t);
}

double update_gain(const GainSchedule& schedule, GainState& state, double t, double V) {
  if (t < state.last_time) {
    throw Error(ErrorKind::Contract,
                fmt::format("update_gain: time regressed from {} to {}", state.last_time, t));
  }
  state.last_time = t;
  const double eta = envelope(schedule, t);
  if (state.phase == GainState::Phase::PreLatch && V <= eta / 2.0) {
    state.phase = GainState::Phase::PostLatch;
    state.latch_time = t;
  }
  if (state.phase == GainState::Phase::PreLatch) {
    return schedule.ramp(t);
  }
  bool clamped = false;
  const double phi_hat = barrier_value(eta, V, schedule.clamp_delta, &clamped);
  if (clamped) ++state.clamp_events;
  return phi_hat;
}

}  // namespace bhsm
