#include "verify.hpp"

#include <cmath>
#include <fmt/format.h>
#include <functional>

#include "error.hpp"
#include "lyapunov.hpp"

namespace bhsm {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double lyapunov_value_by_quadrature(const HongParams& params, std::span<const double> z) {
  if (z.size() != static_cast<std::size_t>(params.profile.r)) {
    throw Error(ErrorKind::Shape, fmt::format("lyapunov quadrature: state has length {}, expected {}",
                                              z.size(), params.profile.r));
  }
  const auto v = v_chain(params, z);
  double total = 0.0;
  for (int i = 0; i < params.profile.r; ++i) {
    const double beta = params.profile.betas[static_cast<std::size_t>(i)];
    const double lo = v[static_cast<std::size_t>(i)];
    const double hi = z[static_cast<std::size_t>(i)];
    const double offset = signed_pow(lo, beta);
    auto f = [beta, offset](double s) { return signed_pow(s, beta) - offset; };
    // Integrand magnitude peaks at the endpoints (monotone in s).
    const double scale = std::max({std::fabs(f(lo)), std::fabs(f(hi)), 1e-30}) * std::fabs(hi - lo);
    const double tol = std::max(1e-13 * scale, 1e-300);
    // Split at 0: |s|^beta has a kink there for beta < 1.
    if ((lo < 0.0 && hi > 0.0) || (hi < 0.0 && lo > 0.0)) {
      total += integrate(f, lo, 0.0, 0.5 * tol) + integrate(f, 0.0, hi, 0.5 * tol);
    } else {
      total += integrate(f, lo, hi, tol);
    }
  }
  return total;
}

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed()) return false;
  }
  return true;
}

VerifyReport verify_assumptions(const HongParams& params, std::uint64_t sample_count, std::uint64_t seed) {
  params.validate();
  if (sample_count < 1) {
    throw Error(ErrorKind::Parameter, "verify_assumptions: sample_count must be >= 1");
  }
  const int r = params.profile.r;
  const bool boundary = params.profile.at_boundary_degree();
  const double hom_degree = params.profile.betas[0] + 1.0;

  VerifyReport report;
  report.seed = seed;
  report.samples = sample_count;

  CheckResult dilation{"sign_feedback_dilation_invariance", 0, 0, 0.0, 0.0};
  CheckResult homogeneity{"lyapunov_homogeneity", 0, 0, 0.0, 1e-9};
  CheckResult descent{"descent_condition", 0, 0, 0.0, 1e-9};
  CheckResult quadrature{"closed_form_vs_quadrature", 0, 0, 0.0, 1e-8};

  SplitMix64 rng(seed);
  std::vector<double> z(static_cast<std::size_t>(r));
  for (std::uint64_t n = 0; n < sample_count; ++n) {
    bool all_zero = true;
    for (auto& zi : z) {
      zi = rng.uniform(-5.0, 5.0);
      all_zero = all_zero && zi == 0.0;
    }
    if (all_zero) z[0] = 1.0;
    const double eps = rng.uniform(0.5, 2.0);

    const double V = lyapunov_value(params, z);
    const auto dilated = apply_dilation(params.profile, eps, z);

    if (boundary) {
      ++dilation.samples;
      const double u_base = nominal_control(params, NominalMode::Sign, z);
      const double u_dil = nominal_control(params, NominalMode::Sign, dilated);
      const double residual = std::fabs(u_dil - u_base);
      dilation.worst_residual = std::max(dilation.worst_residual, residual);
      if (residual != 0.0) ++dilation.failures;
    }

    {
      ++homogeneity.samples;
      const double expected = std::pow(eps, hom_degree) * V;
      const double got = lyapunov_value(params, dilated);
      const double residual = std::fabs(got - expected) / std::max({std::fabs(expected), std::fabs(got), 1e-300});
      homogeneity.worst_residual = std::max(homogeneity.worst_residual, residual);
      if (residual > homogeneity.tolerance) ++homogeneity.failures;
    }

    {
      ++descent.samples;
      const double u0 = boundary ? nominal_control(params, NominalMode::Sign, z)
                                 : nominal_control(params, NominalMode::Continuous, z);
      const double dVr = lyapunov_gradient(params, z).back();
      const double value = u0 * dVr;
      const double allowance = descent.tolerance * (1.0 + std::fabs(u0) * std::fabs(dVr));
      const double residual = value <= 0.0 ? 0.0 : value / (1.0 + std::fabs(u0) * std::fabs(dVr));
      descent.worst_residual = std::max(descent.worst_residual, residual);
      if (value > allowance) ++descent.failures;
    }

    {
      ++quadrature.samples;
      const double q = lyapunov_value_by_quadrature(params, z);
      const double residual = std::fabs(q - V) / std::max({std::fabs(V), std::fabs(q), 1e-300});
      quadrature.worst_residual = std::max(quadrature.worst_residual, residual);
      if (residual > quadrature.tolerance) ++quadrature.failures;
    }
  }

  if (boundary) report.checks.push_back(dilation);
  report.checks.push_back(homogeneity);
  report.checks.push_back(descent);
  report.checks.push_back(quadrature);
  return report;
}

}  // namespace bhsm
