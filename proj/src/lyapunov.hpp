#ifndef BHSM_LYAPUNOV_HPP
#define BHSM_LYAPUNOV_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "controllers.hpp"

namespace bhsm {

/// Closed-form Lyapunov value V(z) = sum_i w_i with
///   w_i = (|z_i|^{b+1} + b*|v_{i-1}|^{b+1})/(b+1) - z_i * signed_pow(v_{i-1}, b),
/// b = beta_{i-1}. Positive definite; zero only at z = 0.
double lyapunov_value(const HongParams& params, std::span<const double> z);

/// Central finite-difference gradient of V, step max(1e-7, 1e-7*|z_i|) per
/// component. Defined away from the origin only. Diagnostic/test use; the
/// control law never consumes it.
std::vector<double> lyapunov_gradient(const HongParams& params, std::span<const double> z);

/// Time ramp applied to the adaptive gain before the latch.
enum class RampKind { Identity, PowerLaw };

/// Envelope and barrier parameters of the time-varying gain.
struct GainSchedule {
  double epsilon = 1.0;      // eta(0)
  double decay_rate = 0.0;   // M in eta(t) = epsilon * exp(-M t)
  double k = 1.0;            // barrier gain weight
  GainFunction g;
  RampKind ramp_kind = RampKind::Identity;
  double ramp_exponent = 1.0;  // PowerLaw: ramp(t) = t^q, q >= 1
  double clamp_delta = 1e-6;   // barrier argument clamped to [0, (1-delta)*eta]

  void validate() const;
  double ramp(double t) const;
};

/// Envelope eta(t) = epsilon * exp(-decay_rate * t), t >= 0.
double envelope(const GainSchedule& schedule, double t);

/// Barrier value xi/(xi - x) with x clamped to [0, (1-clamp_delta)*xi].
/// Sets *clamped when the clamp fired.
double barrier_value(double xi, double x, double clamp_delta, bool* clamped = nullptr);

/// Membership in the shrinking trap domain: V <= eta(t).
bool in_domain(const GainSchedule& schedule, double t, double V);

/// Per-run latch state of the adaptive gain. Single writer; one instance per
/// simulation.
struct GainState {
  enum class Phase { PreLatch, PostLatch };
  Phase phase = Phase::PreLatch;
  std::optional<double> latch_time;
  std::uint64_t clamp_events = 0;
  double last_time = -1.0;  // monotonicity guard across calls
};

/// Advances the gain state machine at (t, V) and returns phi_hat:
/// the time ramp before the latch, the barrier value of V against eta(t)
/// after it. Latches at the first call with V <= eta(t)/2. Time must be
/// non-decreasing across calls.
double update_gain(const GainSchedule& schedule, GainState& state, double t, double V);

}  // namespace bhsm

#endif
