#ifndef BHSM_CONTROLLERS_HPP
#define BHSM_CONTROLLERS_HPP

#include <span>
#include <vector>

#include "homogeneity.hpp"

namespace bhsm {

/// Declarative gain shaping function g: R+ -> R+*, either g(x) = c0 or
/// g(x) = c0 + c1*x (non-decreasing, c0 > 0).
struct GainFunction {
  enum class Kind { Constant, Affine };
  Kind kind = Kind::Constant;
  double c0 = 1.0;
  double c1 = 0.0;

  double operator()(double x) const { return kind == Kind::Constant ? c0 : c0 + c1 * x; }
  void validate() const;
};

/// Gains of the recursive nominal feedback, one per chain stage.
struct HongParams {
  DilationProfile profile;
  std::vector<double> gains;  // l_1 .. l_r, all > 0

  void validate() const;
  int order() const { return profile.r; }
};

enum class ControllerVariant {
  NominalContinuous,
  NominalSign,
  FixedGainRobust,
  BarrierTimeVarying,
};

struct ControllerMode {
  ControllerVariant variant = ControllerVariant::NominalContinuous;
  // BarrierTimeVarying only:
  double k = 1.0;
  GainFunction g;
  // FixedGainRobust only:
  double phi_bar = 0.0;
  double gamma_m = 1.0;
};

enum class NominalMode { Continuous, Sign };

/// Evaluates the nominal feedback recursion v_0..v_r; v_r is the continuous
/// feedback value.
std::vector<double> v_chain(const HongParams& params, std::span<const double> z);

/// Switching function: signed_pow(z_r, beta_{r-1}) - signed_pow(v_{r-1}, beta_{r-1}).
double switching_function(const HongParams& params, std::span<const double> z);

/// Nominal feedback. Continuous mode returns v_r; sign mode returns
/// -l_r * sgn(switching_function), valid only at the boundary degree.
double nominal_control(const HongParams& params, NominalMode mode, std::span<const double> z);

/// Full control law for the selected variant. phi_hat is consumed only by
/// BarrierTimeVarying (pass NaN otherwise).
double control(const ControllerMode& mode, const HongParams& params, std::span<const double> z,
               double phi_hat = 0.0);

/// Throws unless the variant's structural requirements hold for these params
/// (sign-based variants need the boundary degree, positive k, valid g, ...).
void validate_mode(const ControllerMode& mode, const HongParams& params);

}  // namespace bhsm

#endif
