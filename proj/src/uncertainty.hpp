#ifndef BHSM_UNCERTAINTY_HPP
#define BHSM_UNCERTAINTY_HPP

#include <optional>
#include <string_view>
#include <vector>

namespace bhsm {

/// One additive term of a disturbance signal: a*sgn(cos(w t)), a*sgn(sin(w t)),
/// a*sin(w t), a*cos(w t), or the constant a.
struct SignalAtom {
  enum class Kind { SgnCos, SgnSin, Sin, Cos, Constant };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;
  double frequency = 0.0;  // ignored for Constant

  double eval(double t) const;
};

/// Parses "sgn_cos", "sgn_sin", "sin", "cos", "const". Throws on anything else.
SignalAtom::Kind atom_kind_from_name(std::string_view name);
std::string_view atom_kind_name(SignalAtom::Kind kind);

struct DeclaredBounds {
  double phi_bar = 0.0;  // |phi(t)| <= phi_bar
  double gamma_m = 1.0;  // 0 < gamma_m <= gamma(t)
  double gamma_M = 1.0;  // gamma(t) <= gamma_M

  void validate() const;
};

/// Structured description of the matched disturbance phi(t) and input gain
/// gamma(t). Empty term lists mean the nominal chain: phi = 0, gamma = 1.
struct UncertaintySpec {
  std::vector<SignalAtom> phi_terms;
  std::vector<SignalAtom> gamma_terms;
  std::optional<DeclaredBounds> declared_bounds;

  void validate() const;
};

struct UncertaintySample {
  double phi = 0.0;
  double gamma = 1.0;
};

/// Evaluates both signals at time t with the sgn(0) = 0 convention.
UncertaintySample eval_uncertainty(const UncertaintySpec& spec, double t);

/// The third-order benchmark signals: phi = 5 sgn(cos t) - 20 sin(2t),
/// gamma = 3 - 2 sgn(sin(3t)), with bounds (25, 1, 5).
UncertaintySpec benchmark_uncertainty();

}  // namespace bhsm

#endif
