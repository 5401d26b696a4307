#pragma once

// Conservative finite-difference solver for the Cauchy problem; serves as
// the independent verification oracle for the semi-analytical Riemann
// solutions and for batch-settling runs.

#include "bised/model.hpp"
#include "bised/riemann.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bised {

struct Grid1D {
  double x_lo = -1.0;
  double x_hi = 1.0;
  int n_cells = 800;

  double dx() const { return (x_hi - x_lo) / n_cells; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

enum class Scheme { lax_friedrichs, rusanov };

struct SimConfig {
  double cfl = 0.45;
  double t_end = 0.5;
  Scheme scheme = Scheme::rusanov;
  bool clamp_to_phase_space = true;
};

using CellField = std::vector<State>;

/// Piecewise-constant Riemann data with the jump at x = 0.
CellField init_riemann(const Grid1D& grid, const State& s_minus,
                       const State& s_plus);

/// Batch-settling Cauchy data: clear liquid for x < 0, the homogeneous
/// column phi0 on [0, L], and a maximal state for x > L (phi0 scaled onto
/// the maximum packing line unless an explicit state is given).
CellField init_batch(const Grid1D& grid, const ModelParams& p,
                     const State& phi0, double L,
                     const std::optional<State>& packed = std::nullopt);

struct StepResult {
  double dt = 0.0;         ///< step actually taken
  double max_speed = 0.0;  ///< spectral radius used for the CFL bound
  double clamp_l1 = 0.0;   ///< total |projection| * dx applied after update
};

/// One conservative update with copy (outflow) ghost cells; dt comes from
/// cfl * dx / max|lambda| unless dt_cap cuts it shorter. Throws on
/// non-finite cell values.
StepResult step(const ModelParams& p, const Grid1D& grid, CellField& cells,
                const SimConfig& config,
                std::optional<double> dt_cap = std::nullopt);

struct RunResult {
  CellField field;
  double t = 0.0;
  int steps = 0;
  double clamp_total = 0.0;
  std::vector<std::pair<double, CellField>> snapshots;
};

/// Advances to t_end, recomputing dt each step; optional snapshot times are
/// hit exactly by capping dt.
RunResult run(const ModelParams& p, const Grid1D& grid,
              const CellField& initial, const SimConfig& config,
              const std::vector<double>& snapshot_times = {});

/// Per-species L1 distance between a cell field at time t and the
/// semi-analytical solution sampled at cell centers xi = x/t.
Vec2 compare_profile(const Grid1D& grid, const CellField& field, double t,
                     const WaveCurveSolution& solution);

/// Per-species totals sum(phi_i dx), the conserved quantities.
Vec2 total_mass(const Grid1D& grid, const CellField& field);

}  // namespace bised
