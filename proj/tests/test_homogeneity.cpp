#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "homogeneity.hpp"
#include "support.hpp"

using bhsm::apply_dilation;
using bhsm::DilationProfile;
using bhsm::Error;
using bhsm::ErrorKind;
using bhsm::make_profile;
using bhsm::signed_pow;
using bhsm::SplitMix64;

TEST_CASE("signed_pow basic values") {
  CHECK(signed_pow(-8.0, 1.0 / 3.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(signed_pow(5.0, 0.0) == 1.0);
  CHECK(signed_pow(-3.0, 0.0) == -1.0);
  CHECK(signed_pow(0.0, 0.0) == 0.0);
  CHECK(signed_pow(0.0, 0.5) == 0.0);
  CHECK(signed_pow(2.0, 1.0) == 2.0);
}

TEST_CASE("signed_pow rejects bad arguments") {
  CHECK_THROWS_AS(signed_pow(std::nan(""), 1.0), Error);
  CHECK_THROWS_AS(signed_pow(std::numeric_limits<double>::infinity(), 1.0), Error);
  CHECK_THROWS_AS(signed_pow(1.0, -0.5), Error);
  try {
    signed_pow(1.0, -0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("signed_pow is odd and monotone") {
  SplitMix64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-100.0, 100.0);
    const double a = rng.uniform(0.0, 5.0);
    CHECK(signed_pow(-x, a) == -signed_pow(x, a));  // exact: same |x|^a both sides
    const double y = rng.uniform(-100.0, 100.0);
    const double lo = std::min(x, y), hi = std::max(x, y);
    CHECK(signed_pow(lo, a) <= signed_pow(hi, a));
  }
}

TEST_CASE("third-order profile matches the hand-derived exponents") {
  const DilationProfile p = make_profile(3, -1.0 / 3.0, 1.0);
  REQUIRE(p.weights.size() == 5);
  CHECK(p.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.weights[3] == doctest::Approx(0.0).scale(1.0));
  CHECK(p.weights[4] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  REQUIRE(p.betas.size() == 3);
  CHECK(p.betas[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.betas[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.betas[2] == doctest::Approx(4.0).epsilon(1e-15));
  REQUIRE(p.rec_exps.size() == 3);
  CHECK(p.rec_exps[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.rec_exps[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.rec_exps[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(p.at_boundary_degree());

  // Defining relations hold everywhere.
  for (int i = 1; i < p.r; ++i) {
    CHECK((p.betas[i] + 1.0) * p.weights[i] == doctest::Approx(p.betas[0] + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("first-order profile") {
  const DilationProfile p = make_profile(1, -0.5, 1.0);
  CHECK(p.weights[0] == 1.0);
  CHECK(p.weights[1] == 0.5);
  CHECK(p.weights[2] == 0.0);
  CHECK(p.betas[0] == 0.5);
  CHECK(p.rec_exps[0] == 0.5);
  CHECK_FALSE(p.at_boundary_degree());
}

TEST_CASE("make_profile rejects out-of-range parameters") {
  CHECK_THROWS_AS(make_profile(3, -0.5, 1.0), Error);  // below -p_base/r
  CHECK_THROWS_AS(make_profile(3, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_profile(3, 0.1, 1.0), Error);
  CHECK_THROWS_AS(make_profile(0, -0.1, 1.0), Error);
  CHECK_THROWS_AS(make_profile(3, -0.1, 0.0), Error);
  CHECK_THROWS_AS(make_profile(3, -0.1, -1.0), Error);
  try {
    make_profile(3, -0.5, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parameter);
  }
  // The boundary itself is admitted.
  CHECK_NOTHROW(make_profile(3, -1.0 / 3.0, 1.0));
  CHECK_NOTHROW(make_profile(1, -1.0, 1.0));
}

TEST_CASE("apply_dilation matches the definition") {
  const DilationProfile p = make_profile(3, -1.0 / 3.0, 1.0);
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto d2 = apply_dilation(p, 2.0, ones);
  CHECK(d2[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d2[1] == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-15));
  CHECK(d2[2] == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-15));

  const std::vector<double> z{1.0, 0.0, -1.0};
  const auto d4 = apply_dilation(p, 4.0, z);
  CHECK(d4[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(d4[1] == 0.0);
  CHECK(d4[2] == doctest::Approx(-std::pow(4.0, 1.0 / 3.0)).epsilon(1e-15));

  SplitMix64 rng(3);
  const auto zr = support::random_state(rng, 3);
  CHECK(apply_dilation(p, 1.0, zr) == std::vector<double>(zr.begin(), zr.end()));
}

TEST_CASE("apply_dilation rejects bad inputs") {
  const DilationProfile p = make_profile(3, -1.0 / 3.0, 1.0);
  const std::vector<double> short_z{1.0, 2.0};
  CHECK_THROWS_AS(apply_dilation(p, 2.0, short_z), Error);
  const std::vector<double> z{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(apply_dilation(p, 0.0, z), Error);
  CHECK_THROWS_AS(apply_dilation(p, -1.0, z), Error);
}

TEST_CASE("dilations compose multiplicatively") {
  const DilationProfile p = make_profile(3, -1.0 / 3.0, 1.0);
  SplitMix64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const double e1 = rng.uniform(0.1, 10.0);
    const double e2 = rng.uniform(0.1, 10.0);
    const auto z = support::random_state(rng, 3);
    const auto twice = apply_dilation(p, e1, apply_dilation(p, e2, z));
    const auto once = apply_dilation(p, e1 * e2, z);
    for (int j = 0; j < 3; ++j) {
      CHECK(support::rel_err(twice[static_cast<std::size_t>(j)], once[static_cast<std::size_t>(j)]) <= 1e-12);
    }
  }
}
