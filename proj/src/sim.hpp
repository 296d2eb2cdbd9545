#ifndef BHSM_SIM_HPP
#define BHSM_SIM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "controllers.hpp"
#include "lyapunov.hpp"
#include "uncertainty.hpp"

namespace bhsm {

/// One complete simulation instance.
struct Scenario {
  std::string name;
  HongParams hong;
  ControllerMode mode;
  std::optional<GainSchedule> schedule;  // present iff mode is BarrierTimeVarying
  UncertaintySpec uncertainty;
  std::vector<double> z0;
  double tau = 1e-4;
  double horizon = 15.0;
  std::uint32_t record_stride = 100;

  void validate() const;
  int order() const { return hong.profile.r; }
};

/// Sampled time series of one run. States are stored row-major, r per sample.
/// eta/phi_hat columns are empty when the scenario has no gain schedule.
struct Trace {
  int r = 0;
  std::vector<double> times;
  std::vector<double> states;  // times.size() * r
  std::vector<double> controls;
  std::vector<double> V_vals;
  std::vector<double> eta_vals;
  std::vector<double> phi_hat_vals;
  std::optional<double> latch_time;
  std::uint64_t clamp_events = 0;

  std::size_t size() const { return times.size(); }
  bool has_schedule_columns() const { return !eta_vals.empty(); }
  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * static_cast<std::size_t>(r), static_cast<std::size_t>(r)};
  }
};

/// Right-hand side of the perturbed chain: dz_i = z_{i+1}, dz_r = phi + gamma*u.
std::vector<double> chain_rhs(int r, std::span<const double> z, double phi, double gamma, double u);

/// Full-resolution view of one simulation step, handed to observers before
/// decimation. eta and phi_hat are NaN when the scenario has no schedule.
struct SimSample {
  std::size_t step;
  double t;
  std::span<const double> z;
  double u;
  double V;
  double eta;
  double phi_hat;
};

using SampleObserver = std::function<void(const SimSample&)>;

/// Explicit Euler with zero-order-hold control. At each step t_k = k*tau:
/// V_k, gain update (barrier variant), u_k, then
/// z_{k+1} = z_k + tau * chain_rhs(z_k, phi(t_k), gamma(t_k), u_k).
/// Records every record_stride-th sample plus the final one. The observer,
/// when given, sees every step at full resolution.
Trace simulate(const Scenario& scenario, const SampleObserver& observer = {});

}  // namespace bhsm

#endif
