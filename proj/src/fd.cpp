#include "bised/fd.hpp"

#include "bised/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bised {
namespace {

double spectral_radius(const ModelParams& p, const State& s) {
  const auto [l1, l2] = eigenvalues(p, s);
  return std::max(std::abs(l1), std::abs(l2));
}

// Projection onto the phase-space triangle; returns the 1-norm of the move.
double clamp_state(const ModelParams& p, State& s) {
  State before = s;
  s[0] = std::max(s[0], 0.0);
  s[1] = std::max(s[1], 0.0);
  const double phi = total_concentration(s);
  if (phi > p.phi_max) s *= p.phi_max / phi;
  return (s - before).cwiseAbs().sum();
}

}  // namespace

CellField init_riemann(const Grid1D& grid, const State& s_minus,
                       const State& s_plus) {
  if (grid.x_lo >= 0.0 || grid.x_hi <= 0.0)
    throw std::invalid_argument("grid must span x = 0");
  CellField cells(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i)
    cells[i] = grid.center(i) < 0.0 ? s_minus : s_plus;
  return cells;
}

CellField init_batch(const Grid1D& grid, const ModelParams& p,
                     const State& phi0, double L,
                     const std::optional<State>& packed) {
  if (!in_phase_space(p, phi0))
    throw std::invalid_argument("initial column state outside phase space");
  if (grid.x_lo >= 0.0 || grid.x_hi <= L)
    throw std::invalid_argument("grid must cover [0, L] with margins");
  State max_state;
  if (packed) {
    max_state = *packed;
  } else {
    const double phi = total_concentration(phi0);
    max_state = phi > 0.0 ? State(phi0 * (p.phi_max / phi)) : State(0.0, 1.0);
  }
  if (std::abs(total_concentration(max_state) - p.phi_max) > 1e-12)
    throw std::invalid_argument("packed state must lie on the maximum line");

  CellField cells(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    cells[i] = x < 0.0 ? State(State::Zero()) : (x <= L ? phi0 : max_state);
  }
  return cells;
}

StepResult step(const ModelParams& p, const Grid1D& grid, CellField& cells,
                const SimConfig& config, std::optional<double> dt_cap) {
  const int n = grid.n_cells;
  const double dx = grid.dx();

  double max_speed = 0.0;
  std::vector<double> rad(n);
  for (int i = 0; i < n; ++i) {
    if (!cells[i].allFinite())
      throw std::runtime_error("non-finite state in cell " +
                               std::to_string(i));
    rad[i] = spectral_radius(p, cells[i]);
    max_speed = std::max(max_speed, rad[i]);
  }
  StepResult res;
  res.max_speed = max_speed;
  res.dt = max_speed > 0.0 ? config.cfl * dx / max_speed : config.cfl * dx;
  if (dt_cap) res.dt = std::min(res.dt, *dt_cap);

  auto at = [&](int i) -> const State& {
    // copy ghost cells
    return cells[std::clamp(i, 0, n - 1)];
  };
  auto rad_at = [&](int i) { return rad[std::clamp(i, 0, n - 1)]; };

  // interface dissipation coefficient
  const double lxf_speed = dx / res.dt;
  auto iface_a = [&](int i) {
    return config.scheme == Scheme::rusanov
               ? std::max(rad_at(i - 1), rad_at(i))
               : lxf_speed;
  };

  std::vector<Vec2> fl(n + 1);
  for (int i = 0; i <= n; ++i) {
    const State& ql = at(i - 1);
    const State& qr = at(i);
    fl[i] = 0.5 * (flux(p, ql) + flux(p, qr)) - 0.5 * iface_a(i) * (qr - ql);
  }

  const double lam = res.dt / dx;
  for (int i = 0; i < n; ++i) {
    cells[i] -= lam * (fl[i + 1] - fl[i]);
    if (config.clamp_to_phase_space) res.clamp_l1 += clamp_state(p, cells[i]) * dx;
  }
  return res;
}

RunResult run(const ModelParams& p, const Grid1D& grid,
              const CellField& initial, const SimConfig& config,
              const std::vector<double>& snapshot_times) {
  RunResult out;
  out.field = initial;

  std::vector<double> marks = snapshot_times;
  std::sort(marks.begin(), marks.end());
  size_t next_mark = 0;

  while (out.t < config.t_end - 1e-14) {
    double cap = config.t_end - out.t;
    if (next_mark < marks.size())
      cap = std::min(cap, std::max(marks[next_mark] - out.t, 1e-14));
    const StepResult sr = step(p, grid, out.field, config, cap);
    out.t += sr.dt;
    out.clamp_total += sr.clamp_l1;
    ++out.steps;
    while (next_mark < marks.size() && out.t >= marks[next_mark] - 1e-12) {
      out.snapshots.emplace_back(out.t, out.field);
      ++next_mark;
    }
    if (out.steps > 20000000)
      throw std::runtime_error("step budget exhausted before t_end");
  }
  return out;
}

Vec2 compare_profile(const Grid1D& grid, const CellField& field, double t,
                     const WaveCurveSolution& solution) {
  if (t <= 0.0) throw std::invalid_argument("comparison needs t > 0");
  std::vector<double> xi(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) xi[i] = grid.center(i) / t;
  const auto exact = sample_profile(solution, xi);
  Vec2 err = Vec2::Zero();
  for (int i = 0; i < grid.n_cells; ++i)
    err += (field[i] - exact[i]).cwiseAbs() * grid.dx();
  return err;
}

Vec2 total_mass(const Grid1D& grid, const CellField& field) {
  Vec2 m = Vec2::Zero();
  for (const auto& s : field) m += s * grid.dx();
  return m;
}

}  // namespace bised
