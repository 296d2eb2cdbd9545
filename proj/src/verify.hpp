#ifndef BHSM_VERIFY_HPP
#define BHSM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "controllers.hpp"

namespace bhsm {

/// Deterministic 64-bit generator (splitmix64) so verification reports are
/// reproducible across platforms from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

/// Lyapunov value evaluated by adaptive quadrature of the per-stage integral
/// definition, independent of the closed-form path. Diagnostic oracle.
double lyapunov_value_by_quadrature(const HongParams& params, std::span<const double> z);

struct CheckResult {
  std::string name;
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  double worst_residual = 0.0;
  double tolerance = 0.0;

  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Property checks of the nominal feedback and its Lyapunov function over
/// deterministic pseudo-random states in [-5, 5]^r:
///   (a) dilation invariance of the sign-form feedback (boundary degree only),
///   (b) homogeneity V(delta_eps z) = eps^{beta_0 + 1} V(z),
///   (c) the descent condition u0 * dV/dz_r <= 0 up to round-off,
///   (d) closed-form V against the quadrature oracle.
VerifyReport verify_assumptions(const HongParams& params, std::uint64_t sample_count, std::uint64_t seed);

}  // namespace bhsm

#endif
