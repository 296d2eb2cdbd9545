#include "controllers.hpp"

#include <cmath>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_length(const HongParams& params, std::span<const double> z, const char* where) {
  if (z.size() != static_cast<std::size_t>(params.profile.r)) {
    throw Error(ErrorKind::Shape,
                fmt::format("{}: state has length {}, expected {}", where, z.size(), params.profile.r));
  }
}

}  // namespace

void GainFunction::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw Error(ErrorKind::Parameter, fmt::format("gain function: c0 must be > 0, got {}", c0));
  }
  if (kind == Kind::Affine && (!(c1 >= 0.0) || !std::isfinite(c1))) {
    throw Error(ErrorKind::Parameter, fmt::format("gain function: c1 must be >= 0, got {}", c1));
  }
}

void HongParams::validate() const {
  if (gains.size() != static_cast<std::size_t>(profile.r)) {
    throw Error(ErrorKind::Parameter,
                fmt::format("controller gains: expected {} entries, got {}", profile.r, gains.size()));
  }
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) {
      throw Error(ErrorKind::Parameter,
                  fmt::format("controller gains: l_{} must be > 0, got {}", i + 1, gains[i]));
    }
  }
}

std::vector<double> v_chain(const HongParams& params, std::span<const double> z) {
  check_length(params, z, "v_chain");
  const auto& prof = params.profile;
  const int r = prof.r;
  std::vector<double> v(static_cast<std::size_t>(r) + 1);
  v[0] = 0.0;
  // First step collapses to a single signed power since v_0 = 0.
  v[1] = -params.gains[0] * signed_pow(z[0], prof.rec_exps[0]);
  for (int i = 1; i < r; ++i) {
    const double beta = prof.betas[static_cast<std::size_t>(i)];
    const double inner =
        signed_pow(z[static_cast<std::size_t>(i)], beta) - signed_pow(v[static_cast<std::size_t>(i)], beta);
    v[static_cast<std::size_t>(i) + 1] =
        -params.gains[static_cast<std::size_t>(i)] * signed_pow(inner, prof.rec_exps[static_cast<std::size_t>(i)]);
  }
  return v;
}

double switching_function(const HongParams& params, std::span<const double> z) {
  check_length(params, z, "switching_function");
  const auto& prof = params.profile;
  const int r = prof.r;
  const double beta = prof.betas[static_cast<std::size_t>(r) - 1];
  double v_prev = 0.0;
  if (r > 1) {
    const auto v = v_chain(params, z);
    v_prev = v[static_cast<std::size_t>(r) - 1];
  }
  return signed_pow(z[static_cast<std::size_t>(r) - 1], beta) - signed_pow(v_prev, beta);
}

double nominal_control(const HongParams& params, NominalMode mode, std::span<const double> z) {
  if (mode == NominalMode::Continuous) {
    const auto v = v_chain(params, z);
    return v.back();
  }
  if (!params.profile.at_boundary_degree()) {
    throw Error(ErrorKind::Config,
                fmt::format("sign-form feedback requires kappa = -p_base/r = {}, profile has kappa = {}",
                            -params.profile.p_base / params.profile.r, params.profile.kappa));
  }
  return -params.gains.back() * sgn(switching_function(params, z));
}

void validate_mode(const ControllerMode& mode, const HongParams& params) {
  params.validate();
  switch (mode.variant) {
    case ControllerVariant::NominalContinuous:
      return;
    case ControllerVariant::NominalSign:
    case ControllerVariant::FixedGainRobust:
    case ControllerVariant::BarrierTimeVarying:
      if (!params.profile.at_boundary_degree()) {
        throw Error(ErrorKind::Config,
                    "sign-based controller variants require the boundary degree kappa = -p_base/r");
      }
      break;
  }
  if (mode.variant == ControllerVariant::FixedGainRobust) {
    if (!(mode.phi_bar >= 0.0) || !std::isfinite(mode.phi_bar)) {
      throw Error(ErrorKind::Parameter, fmt::format("fixed-gain controller: phi_bar must be >= 0, got {}", mode.phi_bar));
    }
    if (!(mode.gamma_m > 0.0) || !std::isfinite(mode.gamma_m)) {
      throw Error(ErrorKind::Parameter, fmt::format("fixed-gain controller: gamma_m must be > 0, got {}", mode.gamma_m));
    }
  }
  if (mode.variant == ControllerVariant::BarrierTimeVarying) {
    if (!(mode.k > 0.0) || !std::isfinite(mode.k)) {
      throw Error(ErrorKind::Parameter, fmt::format("barrier controller: k must be > 0, got {}", mode.k));
    }
    mode.g.validate();
  }
}

double control(const ControllerMode& mode, const HongParams& params, std::span<const double> z,
               double phi_hat) {
  switch (mode.variant) {
    case ControllerVariant::NominalContinuous:
      return nominal_control(params, NominalMode::Continuous, z);
    case ControllerVariant::NominalSign:
      return nominal_control(params, NominalMode::Sign, z);
    case ControllerVariant::FixedGainRobust: {
      const double s = sgn(switching_function(params, z));
      return -((params.gains.back() + mode.phi_bar) / mode.gamma_m) * s;
    }
    case ControllerVariant::BarrierTimeVarying: {
      if (!(phi_hat >= 0.0) || !std::isfinite(phi_hat)) {
        throw Error(ErrorKind::Contract,
                    fmt::format("barrier controller needs a gain value phi_hat >= 0, got {}", phi_hat));
      }
      const double lr = params.gains.back();
      const double s = sgn(switching_function(params, z));
      return -(mode.g(lr) * lr + mode.k * phi_hat) * s;
    }
  }
  throw Error(ErrorKind::Parameter, "control: unknown controller variant");
}

}  // namespace bhsm
