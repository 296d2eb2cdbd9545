#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "lyapunov.hpp"
#include "support.hpp"
#include "verify.hpp"

using namespace bhsm;

namespace {
// Golden values frozen from an independent adaptive-quadrature evaluation of
// the per-stage integral definition (40-digit arithmetic).
struct Golden {
  std::vector<double> z;
  double V;
};
const Golden kGolden[] = {
    {{1.0, 0.0, 0.0}, 26.8},
    {{1.0, 1.0, 1.0}, 124.39240745740775},
    {{4.0, 4.0, -4.0}, 97.59767811901911},
    {{0.5, -1.25, 2.0}, 0.52638094783323943},
    {{-2.0, 0.75, -0.3}, 51.909954764487946},
};
}  // namespace

TEST_CASE("lyapunov value anchors") {
  const HongParams params = support::third_order_params();
  const std::vector<double> zero{0.0, 0.0, 0.0};
  CHECK(lyapunov_value(params, zero) == 0.0);
  for (const auto& g : kGolden) {
    CHECK(support::rel_err(lyapunov_value(params, g.z), g.V) <= 1e-13);
  }
}

TEST_CASE("general closed form equals the hand-expanded third-order formula") {
  const HongParams params = support::third_order_params();
  SplitMix64 rng(53);
  for (int i = 0; i < 1000; ++i) {
    const auto z = support::random_state(rng, 3);
    const double got = lyapunov_value(params, z);
    const double want = support::lyapunov3_reference(z, 1.0, 2.0);
    CHECK(support::rel_err(got, want) <= 1e-12);
  }
}

TEST_CASE("closed form agrees with the quadrature oracle") {
  const HongParams params = support::third_order_params();
  SplitMix64 rng(59);
  for (int i = 0; i < 100; ++i) {
    const auto z = support::random_state(rng, 3);
    const double closed = lyapunov_value(params, z);
    const double quad = lyapunov_value_by_quadrature(params, z);
    CHECK(support::rel_err(closed, quad) <= 1e-8);
  }
}

TEST_CASE("V is positive definite and homogeneous") {
  const HongParams params = support::third_order_params();
  const double degree = params.profile.betas[0] + 1.0;  // 5/3
  CHECK(degree == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  SplitMix64 rng(61);
  for (int i = 0; i < 1000; ++i) {
    const auto z = support::random_state(rng, 3);
    const double V = lyapunov_value(params, z);
    CHECK(V > 0.0);
    const double eps = rng.uniform(0.5, 2.0);
    const auto dz = apply_dilation(params.profile, eps, z);
    CHECK(support::rel_err(lyapunov_value(params, dz), std::pow(eps, degree) * V) <= 1e-9);
  }
}

TEST_CASE("finite-difference gradient") {
  SUBCASE("first-order closed form derivative") {
    HongParams params;
    params.profile = make_profile(1, -1.0 / 3.0, 1.0);
    params.gains = {1.0};
    const std::vector<double> z{1.0};
    const auto grad = lyapunov_gradient(params, z);  // V = (3/5)|z|^{5/3}, V' = spow(z, 2/3)
    CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-5));
  }

  const HongParams params = support::third_order_params();

  SUBCASE("value at a hand-differentiated point") {
    const std::vector<double> z{1.0, 0.0, 0.0};
    const auto grad = lyapunov_gradient(params, z);
    CHECK(grad[2] == doctest::Approx(16.0).epsilon(1e-4));  // dV/dz3 = psi3(z)
  }

  SUBCASE("odd symmetry is exact") {
    SplitMix64 rng(67);
    for (int i = 0; i < 200; ++i) {
      auto z = support::random_state(rng, 3, -2.0, 2.0);
      if (z[0] == 0.0 && z[1] == 0.0 && z[2] == 0.0) continue;
      const auto gp = lyapunov_gradient(params, z);
      std::vector<double> neg{-z[0], -z[1], -z[2]};
      const auto gn = lyapunov_gradient(params, neg);
      for (int j = 0; j < 3; ++j) {
        CHECK(gn[static_cast<std::size_t>(j)] == -gp[static_cast<std::size_t>(j)]);
      }
    }
  }

  SUBCASE("undefined at the origin") {
    const std::vector<double> zero{0.0, 0.0, 0.0};
    CHECK_THROWS_AS(lyapunov_gradient(params, zero), Error);
  }
}

TEST_CASE("descent condition holds at random points") {
  const HongParams params = support::third_order_params();
  SplitMix64 rng(71);
  for (int i = 0; i < 2000; ++i) {
    const auto z = support::random_state(rng, 3);
    const double u0 = nominal_control(params, NominalMode::Sign, z);
    const double dVr = lyapunov_gradient(params, z).back();
    CHECK(u0 * dVr <= 1e-9 * (1.0 + std::fabs(u0) * std::fabs(dVr)));
  }
}

TEST_CASE("envelope") {
  GainSchedule s;
  s.epsilon = 1.0;
  s.decay_rate = 0.2;
  CHECK(envelope(s, 0.0) == 1.0);
  CHECK(envelope(s, 5.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  GainSchedule flat;
  flat.epsilon = 2.0;
  flat.decay_rate = 0.0;
  CHECK(envelope(flat, 123.0) == 2.0);
  CHECK_THROWS_AS(envelope(s, -0.1), Error);
}

TEST_CASE("barrier value and clamping") {
  bool clamped = false;
  CHECK(barrier_value(1.0, 0.0, 1e-6, &clamped) == 1.0);
  CHECK_FALSE(clamped);
  CHECK(barrier_value(1.0, 0.5, 1e-6, &clamped) == 2.0);
  CHECK_FALSE(clamped);
  CHECK(barrier_value(1.0, 0.999999999, 1e-6, &clamped) == doctest::Approx(1e6).epsilon(1e-9));
  CHECK(clamped);
  CHECK(barrier_value(1.0, -0.25, 1e-6, &clamped) == 1.0);
  CHECK(clamped);
  CHECK_THROWS_AS(barrier_value(0.0, 0.5, 1e-6), Error);
  CHECK_THROWS_AS(barrier_value(-1.0, 0.5, 1e-6), Error);
}

TEST_CASE("in_domain is the non-strict envelope comparison") {
  GainSchedule s;
  s.epsilon = 1.0;
  s.decay_rate = 0.2;
  CHECK(in_domain(s, 0.0, 0.5));
  CHECK_FALSE(in_domain(s, 0.0, 1.5));
  CHECK(in_domain(s, 0.0, 1.0));  // boundary included
}

TEST_CASE("gain state machine") {
  GainSchedule s;
  s.epsilon = 1.0;
  s.decay_rate = 0.2;
  s.clamp_delta = 1e-6;

  SUBCASE("ramp before latch, barrier after") {
    GainState state;
    const double eta3 = envelope(s, 3.0);
    CHECK(update_gain(s, state, 3.0, 10.0 * eta3) == 3.0);
    CHECK(state.phase == GainState::Phase::PreLatch);
    CHECK_FALSE(state.latch_time.has_value());

    const double t_latch = 4.0;
    const double eta4 = envelope(s, t_latch);
    CHECK(update_gain(s, state, t_latch, eta4 / 2.0) == 2.0);  // F at the latch level is exactly 2
    CHECK(state.phase == GainState::Phase::PostLatch);
    CHECK(state.latch_time == t_latch);

    // Latches at most once; later calls stay in the barrier regime.
    const double later = update_gain(s, state, 5.0, envelope(s, 5.0) * 0.9);
    CHECK(state.latch_time == t_latch);
    CHECK(later == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(later >= 1.0);
  }

  SUBCASE("immediate latch when starting inside the half-level") {
    GainState state;
    const double phi = update_gain(s, state, 0.0, 0.25);  // V(z0) <= epsilon/2
    CHECK(state.phase == GainState::Phase::PostLatch);
    CHECK(state.latch_time == 0.0);
    CHECK(phi == doctest::Approx(1.0 / 0.75).epsilon(1e-15));
  }

  SUBCASE("clamp events are counted") {
    GainState state;
    update_gain(s, state, 0.0, 0.1);
    CHECK(state.clamp_events == 0);
    const double phi = update_gain(s, state, 1.0, envelope(s, 1.0) * 2.0);  // far past the barrier
    CHECK(state.clamp_events == 1);
    CHECK(phi == doctest::Approx(1e6).epsilon(1e-9));
  }

  SUBCASE("time must not regress") {
    GainState state;
    update_gain(s, state, 1.0, 10.0);
    CHECK_THROWS_AS(update_gain(s, state, 0.5, 10.0), Error);
    try {
      update_gain(s, state, 0.25, 10.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Contract);
    }
  }

  SUBCASE("power-law ramp") {
    GainSchedule p = s;
    p.ramp_kind = RampKind::PowerLaw;
    p.ramp_exponent = 2.0;
    GainState state;
    CHECK(update_gain(p, state, 3.0, 100.0) == 9.0);
  }

  SUBCASE("barrier gain is 1 only at V = 0") {
    GainState state;
    update_gain(s, state, 0.0, 0.0);  // latches immediately, F(eps, 0) = 1
    CHECK(state.phase == GainState::Phase::PostLatch);
    CHECK(update_gain(s, state, 0.5, 0.0) == 1.0);
    CHECK(update_gain(s, state, 1.0, 1e-12) > 1.0);
  }
}

TEST_CASE("first-order boundary degree degenerates to a relay with V = |z|") {
  HongParams params;
  params.profile = make_profile(1, -1.0, 1.0);  // kappa at -p_base/r
  params.gains = {2.0};
  CHECK(params.profile.at_boundary_degree());
  CHECK(params.profile.betas[0] == 0.0);
  const std::vector<double> z{-3.0};
  CHECK(lyapunov_value(params, z) == 3.0);
  CHECK(nominal_control(params, NominalMode::Sign, z) == 2.0);
  const std::vector<double> pos{0.5};
  CHECK(nominal_control(params, NominalMode::Sign, pos) == -2.0);
  CHECK(switching_function(params, pos) == 1.0);
}

TEST_CASE("schedule validation") {
  GainSchedule s;
  s.epsilon = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.epsilon = 1.0;
  s.decay_rate = -0.1;
  CHECK_THROWS_AS(s.validate(), Error);
  s.decay_rate = 0.2;
  s.clamp_delta = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.clamp_delta = 1e-6;
  s.ramp_kind = RampKind::PowerLaw;
  s.ramp_exponent = 0.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s.ramp_exponent = 2.0;
  CHECK_NOTHROW(s.validate());
}
