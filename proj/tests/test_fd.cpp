#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bised/fd.hpp"
#include "checks.hpp"

#include <cmath>

using namespace bised;

namespace {
const ModelParams p1 = example1_params();
const State kOrigin(0.0, 0.0);
}  // namespace

TEST_CASE("riemann initial data") {
  const Grid1D grid{-1.0, 1.0, 100};
  {
    const auto cells = init_riemann(grid, kOrigin, kOrigin);
    for (const auto& s : cells) CHECK(s.norm() == 0.0);
  }
  {
    const auto cells = init_riemann(grid, kOrigin, State(0.2, 0.25));
    for (int i = 0; i < grid.n_cells; ++i) {
      if (grid.center(i) < 0.0)
        CHECK(cells[i].norm() == 0.0);
      else
        CHECK((cells[i] - State(0.2, 0.25)).norm() == 0.0);
    }
  }
  CHECK_THROWS_AS(init_riemann(Grid1D{0.1, 1.0, 10}, kOrigin, kOrigin),
                  std::invalid_argument);
}

TEST_CASE("batch initial data") {
  const Grid1D grid{-0.5, 1.5, 200};
  const auto cells = init_batch(grid, p1, State(0.2, 0.25), 1.0);
  int plateaus[3] = {0, 0, 0};
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    if (x < 0.0) {
      CHECK(cells[i].norm() == 0.0);
      ++plateaus[0];
    } else if (x <= 1.0) {
      CHECK((cells[i] - State(0.2, 0.25)).norm() == 0.0);
      ++plateaus[1];
    } else {
      CHECK(total_concentration(cells[i]) == doctest::Approx(1.0));
      CHECK(flux(p1, cells[i]).norm() == 0.0);
      ++plateaus[2];
    }
  }
  CHECK(plateaus[0] > 0);
  CHECK(plateaus[1] > 0);
  CHECK(plateaus[2] > 0);
  CHECK_THROWS_AS(init_batch(grid, p1, State(0.7, 0.7), 1.0),
                  std::invalid_argument);
}

TEST_CASE("uniform fields are fixed points of the update") {
  const Grid1D grid{-1.0, 1.0, 64};
  for (const State& s : {State(0.2, 0.25), State(0.0, 0.0)}) {
    CellField cells(grid.n_cells, s);
    SimConfig cfg;
    step(p1, grid, cells, cfg);
    for (const auto& q : cells) CHECK((q - s).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("per-step conservation on compact support") {
  const Grid1D grid{-2.0, 2.0, 400};
  SimConfig cfg;
  cfg.clamp_to_phase_space = false;
  CellField cells(grid.n_cells, kOrigin);
  for (int i = 0; i < grid.n_cells; ++i)
    if (std::abs(grid.center(i)) < 0.4) cells[i] = State(0.2, 0.25);
  const Vec2 m0 = total_mass(grid, cells);
  for (int k = 0; k < 50; ++k) {
    step(p1, grid, cells, cfg);
    const Vec2 m = total_mass(grid, cells);
    CHECK(std::abs(m[0] - m0[0]) <= 1e-13);
    CHECK(std::abs(m[1] - m0[1]) <= 1e-13);
  }
  // the invariant region is respected even without clamping
  for (const auto& s : cells) {
    CHECK(s[0] >= -1e-6);
    CHECK(s[1] >= -1e-6);
    CHECK(total_concentration(s) <= 1.0 + 1e-6);
  }
}

TEST_CASE("one update from two-state data stays within the data range") {
  const Grid1D grid{-0.5, 0.5, 200};
  SimConfig cfg;
  cfg.clamp_to_phase_space = false;
  auto cells = init_riemann(grid, kOrigin, State(0.2, 0.25));
  step(p1, grid, cells, cfg);
  for (const auto& s : cells) {
    CHECK(s[0] >= -1e-15);
    CHECK(s[0] <= 0.2 + 1e-15);
    CHECK(s[1] >= -1e-15);
    CHECK(s[1] <= 0.25 + 1e-15);
  }
}

TEST_CASE("invariant region: overshoot without clamping stays O(dx)") {
  const Grid1D grid{-0.5, 0.5, 400};
  SimConfig cfg;
  cfg.t_end = 0.25;
  cfg.clamp_to_phase_space = false;
  const auto res = run(p1, grid, init_riemann(grid, kOrigin, State(0.3, 0.6)),
                       cfg);
  double worst = 0.0;
  for (const auto& s : res.field) {
    worst = std::max(worst, -std::min(s[0], s[1]));
    worst = std::max(worst, total_concentration(s) - 1.0);
  }
  CHECK(worst <= 10.0 * grid.dx());
}

TEST_CASE("middle-state plateaus appear on opposite axes") {
  // longer time separates the two shocks well beyond the smearing width
  SimConfig cfg;
  cfg.t_end = 2.0;
  const Grid1D grid{-0.1, 0.25, 1600};
  // scan the window between the two shocks for the best plateau cell
  auto plateau = [&](const RunResult& res, const WaveCurveSolution& sol) {
    const double x_lo_w = sol.segments[0].speed_lo * res.t;
    const double x_hi_w = sol.segments[1].speed_lo * res.t;
    State best = res.field[0];
    double best_d = 1e300;
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      if (x < x_lo_w || x > x_hi_w) continue;
      const double d = (res.field[i] - sol.middle_states[0]).norm();
      if (d < best_d) {
        best_d = d;
        best = res.field[i];
      }
    }
    return std::make_pair(best, best_d);
  };
  {
    const auto sol = solve_rp_origin(p1, State(0.2, 0.25));
    const auto res =
        run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.25)), cfg);
    const auto [state, dist] = plateau(res, sol);
    CHECK(dist < 0.05);
    CHECK(state[0] < 0.02);  // plateau hugs the phi2 axis
  }
  {
    const auto sol = solve_rp_origin(p1, State(0.2, 0.35));
    const auto res =
        run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.35)), cfg);
    const auto [state, dist] = plateau(res, sol);
    CHECK(dist < 0.05);
    CHECK(state[1] < 0.02);  // plateau hugs the phi1 axis
  }
}

TEST_CASE("traveling contact discontinuity moves at the analytic speed") {
  const Grid1D grid{-0.5, 0.5, 1600};
  SimConfig cfg;
  cfg.t_end = 0.5;
  const auto res =
      run(p1, grid, init_riemann(grid, kOrigin, State(0.25, 0.25)), cfg);
  double x_mid = 0.0;
  for (int i = 1; i < grid.n_cells; ++i)
    if (res.field[i][0] > 0.125 && res.field[i - 1][0] <= 0.125) {
      x_mid = grid.x_lo + i * grid.dx();
      break;
    }
  CHECK(std::abs(x_mid / res.t - 0.0625) <= 0.02 * 0.0625);
}

TEST_CASE("profile comparison") {
  const auto sol = solve_rp_origin(p1, State(0.2, 0.25));
  const Grid1D grid{-0.1, 0.15, 400};
  SimConfig cfg;
  cfg.t_end = 0.5;

  // identical fields give zero distance
  {
    std::vector<double> xi(grid.n_cells);
    for (int i = 0; i < grid.n_cells; ++i) xi[i] = grid.center(i) / 0.5;
    CellField exact_cells = sample_profile(sol, xi);
    CHECK(compare_profile(grid, exact_cells, 0.5, sol).maxCoeff() == 0.0);
  }
  // coarse-to-fine error decreases
  const auto coarse =
      run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.25)), cfg);
  const Vec2 e_coarse = compare_profile(grid, coarse.field, coarse.t, sol);
  const Grid1D fine{-0.1, 0.15, 800};
  const auto finer =
      run(p1, fine, init_riemann(fine, kOrigin, State(0.2, 0.25)), cfg);
  const Vec2 e_fine = compare_profile(fine, finer.field, finer.t, sol);
  CHECK(e_fine.sum() < e_coarse.sum());
}

TEST_CASE("lax-friedrichs runs and stays bounded") {
  const Grid1D grid{-0.5, 0.5, 200};
  SimConfig cfg;
  cfg.scheme = Scheme::lax_friedrichs;
  cfg.t_end = 0.3;
  const auto res =
      run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.25)), cfg);
  for (const auto& s : res.field) {
    CHECK(s[0] >= -1e-12);
    CHECK(s[1] >= -1e-12);
    CHECK(total_concentration(s) <= 1.0 + 1e-12);
  }
  // more dissipative than rusanov
  const auto sol = solve_rp_origin(p1, State(0.2, 0.25));
  SimConfig rus = cfg;
  rus.scheme = Scheme::rusanov;
  const auto res2 =
      run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.25)), rus);
  CHECK(compare_profile(grid, res.field, res.t, sol).sum() >
        compare_profile(grid, res2.field, res2.t, sol).sum());
}

TEST_CASE("snapshots are captured at requested times") {
  const Grid1D grid{-0.5, 0.5, 100};
  SimConfig cfg;
  cfg.t_end = 0.3;
  const auto res = run(p1, grid, init_riemann(grid, kOrigin, State(0.2, 0.25)),
                       cfg, {0.1, 0.2});
  REQUIRE(res.snapshots.size() == 2);
  CHECK(res.snapshots[0].first == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(res.snapshots[1].first == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(res.t == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("batch settling builds clear liquid above and sediment below") {
  const Grid1D grid{-0.5, 1.5, 400};
  SimConfig cfg;
  cfg.t_end = 1.0;
  const State phi0(0.2, 0.25);
  const auto init = init_batch(grid, p1, phi0, 1.0);
  const Vec2 m0 = total_mass(grid, init);
  const auto res = run(p1, grid, init, cfg);

  // conserved totals (the far fields carry zero flux)
  const Vec2 m1 = total_mass(grid, res.field);
  CHECK(std::abs(m1[0] - m0[0]) <= 1e-12 * m0[0]);
  CHECK(std::abs(m1[1] - m0[1]) <= 1e-12 * m0[1]);

  // the clear-liquid zone has grown past the initial interface and the
  // packed zone stays maximal
  int first_loaded = 0;
  for (int i = 0; i < grid.n_cells; ++i)
    if (res.field[i].norm() > 1e-6) {
      first_loaded = i;
      break;
    }
  CHECK(grid.center(first_loaded) > 0.01);
  CHECK(total_concentration(res.field[grid.n_cells - 1]) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& s : res.field)
    CHECK(in_phase_space(p1, s, 1e-9));
}

TEST_CASE("non-finite cells abort with a diagnostic") {
  const Grid1D grid{-1.0, 1.0, 10};
  CellField cells(grid.n_cells, State(0.1, 0.1));
  cells[3][0] = std::nan("");
  SimConfig cfg;
  CHECK_THROWS_AS(step(p1, grid, cells, cfg), std::runtime_error);
}
