#ifndef BHSM_TESTS_SUPPORT_HPP
#define BHSM_TESTS_SUPPORT_HPP

#include <cmath>
#include <span>
#include <vector>

#include "controllers.hpp"
#include "verify.hpp"

namespace support {

/// Third-order benchmark controller: kappa = -1/3, l = (1, 2, 5).
inline bhsm::HongParams third_order_params() {
  bhsm::HongParams p;
  p.profile = bhsm::make_profile(3, -1.0 / 3.0, 1.0);
  p.gains = {1.0, 2.0, 5.0};
  return p;
}

/// Hand-expanded r=3 switching function, kept as an oracle independent of the
/// recursion: psi3 = spow(z3, 4) + l2^4 * spow(spow(z2, 3/2) + l1^{3/2}*spow(z1, 1), 4/3).
inline double psi3_reference(std::span<const double> z, double l1, double l2) {
  using bhsm::signed_pow;
  const double w = signed_pow(z[1], 1.5) + std::pow(l1, 1.5) * signed_pow(z[0], 1.0);
  return signed_pow(z[2], 4.0) + std::pow(l2, 4.0) * signed_pow(w, 4.0 / 3.0);
}

/// Hand-expanded r=3 Lyapunov value, term-for-term:
/// (3/5)|z1|^{5/3} + (2/5)|z2|^{5/2} + (3/5) l1^{5/2} |z1|^{5/3} + l1^{3/2} z2 spow(z1,1)
/// + (1/5)|z3|^5 + (4/5) l2^5 |w|^{5/3} + z3 l2^4 spow(w, 4/3).
inline double lyapunov3_reference(std::span<const double> z, double l1, double l2) {
  using bhsm::signed_pow;
  const double z1 = z[0], z2 = z[1], z3 = z[2];
  const double w = signed_pow(z2, 1.5) + std::pow(l1, 1.5) * signed_pow(z1, 1.0);
  return 0.6 * std::pow(std::fabs(z1), 5.0 / 3.0) + 0.4 * std::pow(std::fabs(z2), 2.5) +
         0.6 * std::pow(l1, 2.5) * std::pow(std::fabs(z1), 5.0 / 3.0) +
         std::pow(l1, 1.5) * z2 * signed_pow(z1, 1.0) + 0.2 * std::pow(std::fabs(z3), 5.0) +
         0.8 * std::pow(l2, 5.0) * std::pow(std::fabs(w), 5.0 / 3.0) +
         z3 * std::pow(l2, 4.0) * signed_pow(w, 4.0 / 3.0);
}

inline double rel_err(double got, double want) {
  const double denom = std::max({std::fabs(got), std::fabs(want), 1e-300});
  return std::fabs(got - want) / denom;
}

/// Residual of the switching-function comparison measured against the
/// magnitude of its two terms: the difference itself cancels to zero on the
/// switching surface, where a difference-relative error is ill-posed.
inline double psi3_residual(std::span<const double> z, double got, double want, double l1, double l2) {
  using bhsm::signed_pow;
  const double w = signed_pow(z[1], 1.5) + std::pow(l1, 1.5) * signed_pow(z[0], 1.0);
  const double scale = std::pow(std::fabs(z[2]), 4.0) + std::pow(l2, 4.0) * std::pow(std::fabs(w), 4.0 / 3.0);
  return std::fabs(got - want) / std::max({scale, std::fabs(got), std::fabs(want), 1e-300});
}

inline std::vector<double> random_state(bhsm::SplitMix64& rng, int r, double lo = -5.0, double hi = 5.0) {
  std::vector<double> z(static_cast<std::size_t>(r));
  for (auto& zi : z) zi = rng.uniform(lo, hi);
  return z;
}

}  // namespace support

#endif
