#include "homogeneity.hpp"

#include <cmath>
#include <fmt/format.h>

#include "error.hpp"

namespace bhsm {

double signed_pow(double x, double a) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::Domain, fmt::format("signed_pow: non-finite argument x = {}", x));
  }
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::Domain, fmt::format("signed_pow: exponent must be >= 0, got {}", a));
  }
  if (x == 0.0) return 0.0;
  const double s = x > 0.0 ? 1.0 : -1.0;
  if (a == 0.0) return s;
  if (a == 1.0) return x;
  return std::pow(std::fabs(x), a) * s;
}

bool DilationProfile::at_boundary_degree() const {
  const double boundary = -p_base / static_cast<double>(r);
  return std::fabs(kappa - boundary) <= 1e-12 * std::fabs(boundary);
}

DilationProfile make_profile(int r, double kappa, double p_base) {
  if (r < 1) {
    throw Error(ErrorKind::Parameter, fmt::format("make_profile: r must be >= 1, got {}", r));
  }
  if (!(p_base > 0.0) || !std::isfinite(p_base)) {
    throw Error(ErrorKind::Parameter, fmt::format("make_profile: p_base must be > 0, got {}", p_base));
  }
  const double kmin = -p_base / static_cast<double>(r);
  if (!std::isfinite(kappa) || kappa < kmin || kappa >= 0.0) {
    throw Error(ErrorKind::Parameter,
                fmt::format("make_profile: kappa must lie in [{}, 0), got {}", kmin, kappa));
  }

  DilationProfile p;
  p.r = r;
  p.kappa = kappa;
  p.p_base = p_base;
  p.weights.resize(static_cast<std::size_t>(r) + 2);
  for (int i = 0; i < r + 2; ++i) {
    p.weights[static_cast<std::size_t>(i)] = p_base + static_cast<double>(i) * kappa;
  }

  // beta_0 = p_2; (beta_i + 1) p_{i+1} = beta_0 + 1 for the rest.
  p.betas.resize(static_cast<std::size_t>(r));
  p.betas[0] = p.weights[1];
  for (int i = 1; i < r; ++i) {
    p.betas[static_cast<std::size_t>(i)] = (p.betas[0] + 1.0) / p.weights[static_cast<std::size_t>(i)] - 1.0;
  }

  p.rec_exps.resize(static_cast<std::size_t>(r));
  p.rec_exps[0] = p.weights[1] / p.weights[0];
  for (int i = 1; i < r; ++i) {
    p.rec_exps[static_cast<std::size_t>(i)] =
        p.weights[static_cast<std::size_t>(i) + 1] /
        (p.weights[static_cast<std::size_t>(i)] * p.betas[static_cast<std::size_t>(i)]);
  }
  return p;
}

std::vector<double> apply_dilation(const DilationProfile& profile, double eps,
                                   std::span<const double> z) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::Domain, fmt::format("apply_dilation: eps must be > 0, got {}", eps));
  }
  if (z.size() != static_cast<std::size_t>(profile.r)) {
    throw Error(ErrorKind::Shape, fmt::format("apply_dilation: state has length {}, profile expects {}",
                                              z.size(), profile.r));
  }
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::pow(eps, profile.weights[i]) * z[i];
  }
  return out;
}

}  // namespace bhsm
