#ifndef BHSM_HOMOGENEITY_HPP
#define BHSM_HOMOGENEITY_HPP

#include <span>
#include <vector>

namespace bhsm {

/// Signed power |x|^a * sgn(x) with sgn(0) = 0. For a = 0 this reduces to the
/// sign of x in {-1, 0, 1}. Requires finite x and a >= 0.
double signed_pow(double x, double a);

/// Weight/exponent bookkeeping for the dilation family of a chain of length r
/// with homogeneity degree kappa: p_i = p_base + (i-1)*kappa.
///
/// rec_exps[i] is the outer exponent applied at step i of the feedback
/// recursion. Index 0 stores the collapsed first-step exponent p_2/p_1 (the
/// inner term is a bare signed power there, so the exponents compose); for
/// i >= 1 it is p_{i+2} / (p_{i+1} * beta_i).
struct DilationProfile {
  int r = 0;
  double kappa = 0.0;
  double p_base = 1.0;
  std::vector<double> weights;   // p_1 .. p_{r+2}
  std::vector<double> betas;     // beta_0 .. beta_{r-1}
  std::vector<double> rec_exps;  // one per recursion step

  /// True when kappa sits at the lower end -p_base/r, where the recursion's
  /// final exponent is 0 and the nominal feedback degenerates to a bounded
  /// sign law.
  bool at_boundary_degree() const;
};

/// Builds the profile for (r, kappa, p_base). kappa must lie in
/// [-p_base/r, 0) so that p_1..p_r stay positive.
DilationProfile make_profile(int r, double kappa, double p_base = 1.0);

/// Component-wise dilation (eps^{p_1} z_1, ..., eps^{p_r} z_r), eps > 0.
std::vector<double> apply_dilation(const DilationProfile& profile, double eps,
                                   std::span<const double> z);

}  // namespace bhsm

#endif
