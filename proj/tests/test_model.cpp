#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bised/model.hpp"

#include <cmath>

using namespace bised;

namespace {
const ModelParams p1 = example1_params();
const ModelParams p2 = example2_params();

// independent long-double route through the constitutive chain
long double flux_ld(int i, long double x, long double y, const ModelParams& p) {
  const long double phi = x + y;
  const long double u1 = p.v_inf[0] * powl(1.0L - phi, p.n[0] - 1.0L);
  const long double u2 = p.v_inf[1] * powl(1.0L - phi, p.n[1] - 1.0L);
  const long double mix = x * u1 + y * u2;
  return i == 0 ? x * (u1 - mix) : y * (u2 - mix);
}
}  // namespace

TEST_CASE("total concentration") {
  CHECK(total_concentration(State(0, 0)) == 0.0);
  CHECK(total_concentration(State(0.2, 0.25)) == doctest::Approx(0.45));
  CHECK(total_concentration(State(0.5, 0.5)) == 1.0);
}

TEST_CASE("hindered settling factor") {
  CHECK(hindered_settling(p1, 0.0, 0) == 1.0);
  CHECK(hindered_settling(p1, 1.0, 1) == 0.0);
  CHECK(hindered_settling(p1, 1.2, 0) == 0.0);
  CHECK(hindered_settling(p1, -0.1, 0) == 0.0);
  // 0.55^3
  CHECK(hindered_settling(p1, 0.45, 0) ==
        doctest::Approx(0.166375).epsilon(1e-14));
  CHECK_THROWS_AS(hindered_settling(p1, 0.2, 2), std::invalid_argument);
}

TEST_CASE("slip velocity") {
  CHECK(slip_velocity(p1, State(0, 0), 0) == 1.0);
  // 0.5 * 0.55^2
  CHECK(slip_velocity(p1, State(0.2, 0.25), 1) ==
        doctest::Approx(0.15125).epsilon(1e-14));
  CHECK(slip_velocity(p1, State(0.4, 0.6), 0) == 0.0);
}

TEST_CASE("absolute velocity") {
  CHECK(absolute_velocity(p1, State(0, 0), 0) == 1.0);
  // on the phi1 axis: u1 = u2 = 0.125, Phi.u = 0.0625
  CHECK(absolute_velocity(p1, State(0.5, 0), 0) ==
        doctest::Approx(0.0625).epsilon(1e-14));
  // on the interior contact line: v2 = v1
  CHECK(absolute_velocity(p1, State(0.2, 0.3), 1) ==
        doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("flux evaluation") {
  CHECK(flux(p1, State(0, 0)).norm() == 0.0);
  CHECK(flux(p1, State(0.5, 0.5)).norm() == 0.0);
  const Vec2 f = flux(p1, State(0.2, 0.25));
  CHECK(f[0] == doctest::Approx((double)flux_ld(0, 0.2L, 0.25L, p1))
                    .epsilon(1e-14));
  CHECK(f[1] == doctest::Approx((double)flux_ld(1, 0.2L, 0.25L, p1))
                    .epsilon(1e-14));
  CHECK(f[0] == doctest::Approx(0.0190575).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.020040625).epsilon(1e-12));
}

TEST_CASE("flux vanishes on the maximum packing line") {
  for (int k = 0; k <= 20; ++k) {
    const double t = k / 20.0;
    CHECK(flux(p1, State(t, 1.0 - t)).norm() == 0.0);
    CHECK(flux(p2, State(t, 1.0 - t)).norm() == 0.0);
  }
}

TEST_CASE("flux continuity across the cut-off") {
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const State inside(0.3, 0.7 - eps);
    CHECK(flux(p1, inside).norm() < 10.0 * eps);
    CHECK(flux(p1, State(0.3, 0.7 + eps)).norm() == 0.0);
  }
}

TEST_CASE("axis identity v_i = (1-phi) u_i") {
  for (const auto& p : {p1, p2}) {
    for (int k = 1; k < 100; ++k) {
      const double phi = k / 100.0;
      const State on_axis1(phi, 0.0);
      const State on_axis2(0.0, phi);
      const double u1 = slip_velocity(p, on_axis1, 0);
      const double u2 = slip_velocity(p, on_axis2, 1);
      CHECK(absolute_velocity(p, on_axis1, 0) ==
            doctest::Approx((1.0 - phi) * u1).epsilon(1e-14));
      CHECK(absolute_velocity(p, on_axis2, 1) ==
            doctest::Approx((1.0 - phi) * u2).epsilon(1e-14));
    }
  }
}

TEST_CASE("velocities coincide on the interior contact line") {
  // phi* = 0.5 for the first parameter set
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.5 * k / 100.0;
    const State s(t, 0.5 - t);
    const Vec2 v = absolute_velocities(p1, s);
    CHECK(std::abs(v[0] - v[1]) <= 1e-12);
  }
}

TEST_CASE("slip velocity order switches at phi*") {
  const double phi_star = 0.5;
  for (int k = 1; k < 1000; ++k) {
    const double phi = k / 1000.0;
    const Vec2 u = slip_velocities(p1, phi);
    if (phi < phi_star - 1e-12) CHECK(u[0] > u[1]);
    if (phi > phi_star + 1e-12 && phi < 1.0) CHECK(u[0] < u[1]);
  }
}

TEST_CASE("parameter validation") {
  CHECK(validate_params(p1).valid);
  CHECK(validate_params(p2).valid);

  ModelParams bad = p1;
  bad.v_inf = Vec2(0.5, 1.0);
  const auto rep = validate_params(bad);
  CHECK_FALSE(rep.valid);
  REQUIRE(rep.violations.size() >= 1);
  CHECK(rep.violations[0].find("v_inf1 > v_inf2") != std::string::npos);

  ModelParams nan_p = p1;
  nan_p.n[0] = std::nan("");
  CHECK_FALSE(validate_params(nan_p).valid);

  ModelParams neg = p1;
  neg.v_inf[1] = -0.5;
  CHECK_FALSE(validate_params(neg).valid);

  // the slip-decay indicator holds on the grid, while the classical
  // parameter ordering must fail under these exponents
  CHECK(validate_params(p1).slip_decay_ok);
  CHECK_FALSE(validate_params(p1).classical_order_holds);
  CHECK_FALSE(validate_params(p2).classical_order_holds);
}

TEST_CASE("extended mode drops the cut-off") {
  // negative phi2, total below 1: the power law extends smoothly
  const State s(0.1, -0.05);
  CHECK(flux(p1, s).norm() == 0.0);  // cut-off zeroes it
  CHECK(std::isfinite(flux(p1, s, FluxMode::extended).norm()));
  CHECK(flux(p1, s, FluxMode::extended).norm() > 0.0);
  // integer exponents extend beyond phi = 1 as well
  CHECK(std::isfinite(
      slip_velocity(p1, State(0.7, 0.5), 0, FluxMode::extended)));
}

TEST_CASE("phase space membership") {
  CHECK(in_phase_space(p1, State(0.2, 0.25)));
  CHECK(in_phase_space(p1, State(0.5, 0.5)));
  CHECK_FALSE(in_phase_space(p1, State(0.6, 0.5)));
  CHECK_FALSE(in_phase_space(p1, State(-0.1, 0.2)));
  CHECK(in_phase_space(p1, State(-1e-13, 0.2)));
}
