#include "uncertainty.hpp"

#include <cmath>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

namespace {
double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

double SignalAtom::eval(double t) const {
  switch (kind) {
    case Kind::SgnCos:
      return amplitude * sgn(std::cos(frequency * t));
    case Kind::SgnSin:
      return amplitude * sgn(std::sin(frequency * t));
    case Kind::Sin:
      return amplitude * std::sin(frequency * t);
    case Kind::Cos:
      return amplitude * std::cos(frequency * t);
    case Kind::Constant:
      return amplitude;
  }
  return 0.0;
}

SignalAtom::Kind atom_kind_from_name(std::string_view name) {
  if (name == "sgn_cos") return SignalAtom::Kind::SgnCos;
  if (name == "sgn_sin") return SignalAtom::Kind::SgnSin;
  if (name == "sin") return SignalAtom::Kind::Sin;
  if (name == "cos") return SignalAtom::Kind::Cos;
  if (name == "const") return SignalAtom::Kind::Constant;
  throw Error(ErrorKind::Config, fmt::format("unknown signal atom kind '{}'", name));
}

std::string_view atom_kind_name(SignalAtom::Kind kind) {
  switch (kind) {
    case SignalAtom::Kind::SgnCos: return "sgn_cos";
    case SignalAtom::Kind::SgnSin: return "sgn_sin";
    case SignalAtom::Kind::Sin: return "sin";
    case SignalAtom::Kind::Cos: return "cos";
    case SignalAtom::Kind::Constant: return "const";
  }
  return "?";
}

void DeclaredBounds::validate() const {
  if (!(phi_bar >= 0.0) || !std::isfinite(phi_bar)) {
    throw Error(ErrorKind::Parameter, fmt::format("declared bounds: phi_bar must be >= 0, got {}", phi_bar));
  }
  if (!(gamma_m > 0.0) || !std::isfinite(gamma_m)) {
    throw Error(ErrorKind::Parameter, fmt::format("declared bounds: gamma_m must be > 0, got {}", gamma_m));
  }
  if (!(gamma_M >= gamma_m) || !std::isfinite(gamma_M)) {
    throw Error(ErrorKind::Parameter,
                fmt::format("declared bounds: gamma_M must be >= gamma_m, got {} < {}", gamma_M, gamma_m));
  }
}

void UncertaintySpec::validate() const {
  for (const auto& atoms : {phi_terms, gamma_terms}) {
    for (const auto& a : atoms) {
      if (!std::isfinite(a.amplitude) || !std::isfinite(a.frequency)) {
        throw Error(ErrorKind::Parameter, "uncertainty atom: amplitude and frequency must be finite");
      }
    }
  }
  if (declared_bounds) declared_bounds->validate();
}

UncertaintySample eval_uncertainty(const UncertaintySpec& spec, double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorKind::Domain, fmt::format("eval_uncertainty: time must be >= 0, got {}", t));
  }
  UncertaintySample s;
  s.phi = 0.0;
  for (const auto& a : spec.phi_terms) s.phi += a.eval(t);
  if (spec.gamma_terms.empty()) {
    s.gamma = 1.0;
  } else {
    s.gamma = 0.0;
    for (const auto& a : spec.gamma_terms) s.gamma += a.eval(t);
  }
  return s;
}

UncertaintySpec benchmark_uncertainty() {
  UncertaintySpec spec;
  spec.phi_terms = {{SignalAtom::Kind::SgnCos, 5.0, 1.0}, {SignalAtom::Kind::Sin, -20.0, 2.0}};
  spec.gamma_terms = {{SignalAtom::Kind::Constant, 3.0, 0.0}, {SignalAtom::Kind::SgnSin, -2.0, 3.0}};
  spec.declared_bounds = DeclaredBounds{25.0, 1.0, 5.0};
  return spec;
}

}  // namespace bhsm
