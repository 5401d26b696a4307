#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bised/riemann.hpp"
#include "checks.hpp"

#include <cmath>

using namespace bised;
using namespace bised::testing;

namespace {
const ModelParams p1 = example1_params();
const ModelParams p2 = example2_params();
const State kOrigin(0.0, 0.0);

std::string structure(const WaveCurveSolution& sol) {
  std::string s;
  for (const auto& seg : sol.segments) {
    if (seg.kind == WaveKind::rarefaction)
      s += 'R';
    else
      s += (seg.char_left && seg.char_right) ? 'D' : 'S';
  }
  return s;
}
}  // namespace

TEST_CASE("region splitting at the contact line") {
  CHECK(region_of(p1, State(0.2, 0.25)) == Region::dx_minus);
  CHECK(region_of(p1, State(0.2, 0.35)) == Region::dx_plus);
  CHECK(region_of(p1, State(0.25, 0.25)) == Region::on_contact);
}

TEST_CASE("rarefaction integration, first family") {
  // upper-right of the inflection: runs into the maximum packing line near
  // the (0,1) corner with monotone eigenvalues
  {
    const auto rp = rarefaction_integrate(p1, State(0.3, 0.3), 1, +1);
    CHECK(rp.stop == RarefactionStop::max_line);
    CHECK(total_concentration(rp.path.back()) >= 1.0 - 1e-6);
    CHECK(rp.path.back()[0] < 0.05);
    for (size_t k = 1; k < rp.lambdas.size(); ++k)
      CHECK(rp.lambdas[k] >= rp.lambdas[k - 1] - 1e-12);
  }
  // starting on the phi1 axis: stays on the axis, ends at (1,0)
  {
    const auto rp = rarefaction_integrate(p1, State(0.5, 0.0), 1, +1);
    CHECK(rp.stop == RarefactionStop::max_line);
    CHECK(rp.path.back()[0] >= 1.0 - 1e-6);
    for (const auto& s : rp.path) CHECK(std::abs(s[1]) < 1e-9);
  }
  // lower-left of the inflection the increasing direction points away from
  // the packing line; the integration leaves through an axis instead
  {
    const auto rp = rarefaction_integrate(p1, State(0.2, 0.1), 1, +1);
    CHECK(rp.stop == RarefactionStop::boundary);
    CHECK(total_concentration(rp.path.back()) < 0.5);
  }
  // caller predicate fires mid-fan
  {
    const auto rp = rarefaction_integrate(
        p1, State(0.3, 0.3), 1, +1,
        [](const State&, double lam) { return lam > -0.05; });
    CHECK(rp.stop == RarefactionStop::predicate);
    CHECK(rp.lambdas.back() == doctest::Approx(-0.05).epsilon(1e-3));
  }
  // backward tracing runs the eigenvalue down instead
  {
    const auto rp = rarefaction_integrate(p1, State(0.3, 0.3), 1, -1);
    REQUIRE(rp.lambdas.size() > 2);
    for (size_t k = 1; k < rp.lambdas.size(); ++k)
      CHECK(rp.lambdas[k] <= rp.lambdas[k - 1] + 1e-12);
  }
}

TEST_CASE("middle states of the origin Riemann problem") {
  {
    const State m = middle_state_origin(p1, State(0.2, 0.25));
    CHECK(m[0] == 0.0);
    CHECK(m[1] > 0.0);
    CHECK(m[1] < 0.5);
    CHECK(classify_shock(p1, m, State(0.2, 0.25)).kind == ShockKind::lax2);
  }
  {
    const State m = middle_state_origin(p1, State(0.2, 0.35));
    CHECK(m[1] == 0.0);
    CHECK(m[0] > 0.5);
    CHECK(m[0] < 1.0);
  }
  CHECK_THROWS_AS(middle_state_origin(p1, State(0.25, 0.25)),
                  std::invalid_argument);
  CHECK_THROWS_AS(middle_state_origin(p1, State(0.3, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("middle states approach the contact endpoints") {
  // from below: middle state tends to (0, phi*)
  double prev = 1e300;
  for (int k = 1; k <= 10; ++k) {
    const double eps = 0.2 * std::pow(2.0, -k);
    const State m = middle_state_origin(p1, State(0.2, 0.3 - eps));
    const double d = (m - State(0.0, 0.5)).norm();
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
  // from above: tends to (phi*, 0)
  prev = 1e300;
  for (int k = 1; k <= 10; ++k) {
    const double eps = 0.2 * std::pow(2.0, -k);
    const State m = middle_state_origin(p1, State(0.2, 0.3 + eps));
    const double d = (m - State(0.5, 0.0)).norm();
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("origin Riemann problem solutions") {
  {
    const auto sol = solve_rp_origin(p1, State(0.3, 0.0));
    REQUIRE(sol.segments.size() == 1);
    CHECK(sol.segments[0].shock_class.kind == ShockKind::overcompressive);
    CHECK(sol.segments[0].speed_lo == doctest::Approx(0.2401));
    CHECK(check_solution(p1, sol).empty());
  }
  {
    const auto sol = solve_rp_origin(p1, State(0.25, 0.25));
    REQUIRE(sol.segments.size() == 1);
    CHECK(sol.segments[0].shock_class.kind == ShockKind::lax1);
    CHECK(sol.segments[0].shock_class.right_char_2);
    CHECK(sol.segments[0].speed_lo == doctest::Approx(0.0625));
  }
  {
    const auto sol = solve_rp_origin(p1, State(0.2, 0.25));
    REQUIRE(sol.segments.size() == 2);
    CHECK(sol.segments[0].shock_class.kind == ShockKind::lax1);
    CHECK(sol.segments[1].shock_class.kind == ShockKind::lax2);
    CHECK(sol.segments[0].speed_lo < sol.segments[1].speed_lo);
    CHECK(check_solution(p1, sol).empty());
  }
  CHECK_THROWS_AS(solve_rp_origin(p1, State(0.7, 0.7)),
                  std::invalid_argument);
}

TEST_CASE("characteristic shock partner") {
  // lower-left of the inflection: partner beyond it, exactly characteristic
  const auto m = char_shock_match(p1, State(0.2, 0.1), 1);
  REQUIRE(m.has_value());
  const auto sigma = shock_speed(p1, State(0.2, 0.1), *m, 1e-6);
  REQUIRE(sigma.has_value());
  CHECK(std::abs(*sigma - eigenvalues(p1, *m).first) <= 1e-9);
  // beyond the straight-line chord of the inflection endpoints
  CHECK(2.5 * (*m)[0] + 2.0 * (*m)[1] > 1.0);

  // rarefaction side: no partner
  CHECK_FALSE(char_shock_match(p1, State(0.3, 0.3), 1).has_value());
}

TEST_CASE("wave curves to the maximum packing line, first parameter set") {
  {
    const auto sol = solve_rp_to_max(p1, State(0.3, 0.3));
    CHECK_FALSE(sol.unresolved);
    CHECK(structure(sol) == "R");
    CHECK((sol.right_datum - State(0, 1)).norm() == 0.0);
    CHECK(check_solution(p1, sol).empty());
  }
  {
    const auto sol = solve_rp_to_max(p1, State(0.2, 0.1));
    CHECK_FALSE(sol.unresolved);
    CHECK(structure(sol) == "SR");
    CHECK(sol.segments[0].char_right);
    CHECK((sol.right_datum - State(0, 1)).norm() == 0.0);
    CHECK(check_solution(p1, sol).empty());
  }
  {
    const auto sol = solve_rp_to_max(p1, State(0.5, 0.0));
    CHECK(structure(sol) == "R");
    CHECK((sol.right_datum - State(1, 0)).norm() == 0.0);
  }
  {
    // requesting a specific maximal state reports the mismatch
    const auto sol =
        solve_rp_to_max(p1, State(0.3, 0.3), State(0.5, 0.5));
    CHECK(sol.note.find("differs") != std::string::npos);
  }
}

TEST_CASE("wave curves to the maximum packing line, second parameter set") {
  // light region: single fan
  {
    const auto sol = solve_rp_to_max(p2, State(0.05, 0.9));
    CHECK_FALSE(sol.unresolved);
    CHECK(structure(sol) == "R");
    CHECK(check_solution(p2, sol).empty());
  }
  // characteristic shock across the top branch, then a fan
  {
    const auto sol = solve_rp_to_max(p2, State(0.02, 0.6));
    CHECK_FALSE(sol.unresolved);
    CHECK(structure(sol) == "SR");
    CHECK(sol.segments[0].char_right);
    CHECK(check_solution(p2, sol).empty());
  }
  // white region: shock, fan to the double contact, doubly characteristic
  // jump, and the final fan
  {
    const auto sol = solve_rp_to_max(p2, State(0.1, 0.1));
    CHECK_FALSE(sol.unresolved);
    CHECK(structure(sol) == "SRDR");
    CHECK(sol.segments[0].char_right);
    CHECK(sol.segments[2].char_left);
    CHECK(sol.segments[2].char_right);
    const double sig = sol.segments[2].speed_lo;
    CHECK(std::abs(sig - eigenvalues(p2, sol.segments[2].left).first) <= 1e-6);
    CHECK(std::abs(sig - eigenvalues(p2, sol.segments[2].right).first) <=
          1e-6);
    CHECK(check_solution(p2, sol).empty());
  }
  // the degenerate band near the packing line stays unresolved rather than
  // guessed
  {
    const auto sol = solve_rp_to_max(p2, State(0.45, 0.5));
    CHECK(sol.unresolved);
    CHECK_FALSE(sol.note.empty());
  }
}

TEST_CASE("double contact curve") {
  const auto dc1 = double_contact_locus(p1, 16);
  CHECK(dc1.b_side.empty());

  const auto dc2 = double_contact_locus(p2, 16);
  REQUIRE(dc2.b_side.size() >= 4);
  REQUIRE(dc2.b_side.size() == dc2.c_side.size());
  for (size_t k = 0; k < dc2.b_side.size(); ++k) {
    const double sig = dc2.sigmas[k];
    CHECK(std::abs(sig - eigenvalues(p2, dc2.b_side[k]).first) <= 1e-8);
    CHECK(std::abs(sig - eigenvalues(p2, dc2.c_side[k]).first) <= 1e-8);
    const auto cls = classify_shock(p2, dc2.b_side[k], dc2.c_side[k]);
    CHECK(cls.kind == ShockKind::lax1);
    CHECK(cls.left_char_1);
    CHECK(cls.right_char_1);
  }
}

TEST_CASE("profile sampling") {
  const auto sol = solve_rp_origin(p1, State(0.2, 0.25));
  const double s1 = sol.segments[0].speed_lo;
  const double s2 = sol.segments[1].speed_lo;
  const auto states = sample_profile(
      sol, {-1.0, s1 - 1e-6, 0.5 * (s1 + s2), s2 + 1e-6, 10.0});
  CHECK((states[0] - kOrigin).norm() == 0.0);
  CHECK((states[1] - kOrigin).norm() == 0.0);
  CHECK((states[2] - sol.middle_states[0]).norm() == 0.0);
  CHECK((states[3] - State(0.2, 0.25)).norm() == 0.0);
  CHECK((states[4] - State(0.2, 0.25)).norm() == 0.0);
}

TEST_CASE("one-shock and two-shock contact solutions sample identically") {
  // triple-shock rule: the split through any middle state on the contact
  // line is invisible in the profile
  const State right(0.2, 0.3);
  const auto direct = solve_rp_origin(p1, right);
  REQUIRE(direct.segments.size() == 1);

  WaveCurveSolution split = direct;
  split.segments.clear();
  const State mid(0.0, 0.5);
  WaveSegment a;
  a.kind = WaveKind::shock;
  a.left = kOrigin;
  a.right = mid;
  a.speed_lo = a.speed_hi = 0.0625;
  WaveSegment b = a;
  b.left = mid;
  b.right = right;
  split.segments = {a, b};
  split.middle_states = {mid};

  std::vector<double> xi;
  for (int k = 0; k <= 200; ++k) xi.push_back(-0.05 + 0.2 * k / 200.0);
  const auto one = sample_profile(direct, xi);
  const auto two = sample_profile(split, xi);
  for (size_t k = 0; k < xi.size(); ++k) {
    if (std::abs(xi[k] - 0.0625) < 1e-9) continue;
    CHECK((one[k] - two[k]).norm() == 0.0);
  }
}

TEST_CASE("struct2 collapses into struct3 near the region boundary") {
  // along a horizontal segment the four-wave composite loses its middle fan
  // as the left state approaches the three-wave region
  const double y = 0.4;
  double lo = 0.02, hi = 0.05;  // lo: SR side, hi: SRDR side
  auto kind_at = [&](double x) {
    return structure(solve_rp_to_max(p2, State(x, y)));
  };
  REQUIRE(kind_at(lo) == "SR");
  REQUIRE(kind_at(hi) == "SRDR");
  for (int it = 0; it < 8; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kind_at(mid) == "SR" ? lo : hi) = mid;
  }
  // approach the boundary from the composite side: the fan span between the
  // first shock and the double-contact jump vanishes monotonically
  double prev_span = 1e300;
  double span = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double x = hi + (0.05 - hi) * std::pow(0.25, k);
    const auto sol = solve_rp_to_max(p2, State(x, y));
    REQUIRE(structure(sol) == "SRDR");
    span = sol.segments[1].speed_hi - sol.segments[1].speed_lo;
    CHECK(span < prev_span);
    CHECK(check_solution(p2, sol).empty());
    prev_span = span;
  }
  CHECK(span < 0.25 * (solve_rp_to_max(p2, State(0.05, y)).segments[1].speed_hi -
                       solve_rp_to_max(p2, State(0.05, y)).segments[1].speed_lo));
}
