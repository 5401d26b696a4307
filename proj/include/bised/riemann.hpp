#pragma once

// Semi-analytical Riemann solvers: RP(O, Phi) through axis middle states,
// and RP(Phi, Phi_max) wave curves with rarefactions, characteristic shocks
// and double-contact composites.

#include "bised/hugoniot.hpp"
#include "bised/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bised {

enum class Region { dx_minus, dx_plus, on_contact };

const char* to_string(Region r);

/// Position of a state relative to the interior contact line phi = phi*.
Region region_of(const ModelParams& p, const State& s,
                 double tol = kPhaseSpaceTol);

enum class WaveKind { shock, rarefaction, contact };

const char* to_string(WaveKind k);

/// One elementary wave. Shocks and contacts carry a single speed
/// (speed_lo == speed_hi); rarefactions span [lambda(left), lambda(right)]
/// with the phase-space path and eigenvalue samples stored alongside.
struct WaveSegment {
  int family = 1;
  WaveKind kind = WaveKind::shock;
  State left = State::Zero();
  State right = State::Zero();
  double speed_lo = 0.0;
  double speed_hi = 0.0;
  ShockClass shock_class;        ///< meaningful for shocks/contacts
  bool char_left = false;        ///< sigma = lambda_family(left)
  bool char_right = false;       ///< sigma = lambda_family(right)
  Polyline path;                 ///< states along the wave
  std::vector<double> lambdas;   ///< rarefactions: lambda at path samples
};

struct WaveCurveSolution {
  State left_datum = State::Zero();
  State right_datum = State::Zero();
  std::vector<WaveSegment> segments;
  std::vector<State> middle_states;
  bool unresolved = false;
  std::string note;
};

/// Why a rarefaction integration stopped.
enum class RarefactionStop {
  boundary,     ///< left the triangle through an axis
  max_line,     ///< reached phi >= 1 - 1e-9
  inflection,   ///< grad(lambda) . r changed orientation
  coincidence,  ///< entered a coincidence neighborhood
  predicate,    ///< caller predicate fired
  stalled,      ///< step control could not advance
};

struct RarefactionPath {
  Polyline path;
  std::vector<double> lambdas;
  RarefactionStop stop = RarefactionStop::stalled;
};

using RarefactionPredicate = std::function<bool(const State&, double lambda)>;

/// Integrates d Phi / d xi = r_family / |r_family| with the sign chosen so
/// lambda_family increases (direction = +1) or decreases (-1), adaptive
/// embedded RK with per-step error control 1e-10. Stops at the phase-space
/// boundary, at orientation flips (inflection), near coincidence points, or
/// when the predicate fires.
RarefactionPath rarefaction_integrate(
    const ModelParams& p, const State& s0, int family, int direction,
    const RarefactionPredicate& stop_predicate = nullptr);

/// Middle state of RP(O, s): on the phi2 axis with total concentration in
/// (0, phi*) for s in Dx-, on the phi1 axis in (phi*, 1) for s in Dx+. The
/// jump-collinearity determinant is scanned over 512 cells and bisected;
/// candidates must classify as 2-Lax toward s with ordered speeds. Throws
/// with a diagnostic when no admissible root exists.
State middle_state_origin(const ModelParams& p, const State& s);

/// Wave-curve solution of RP(O, s): a single classified shock for s on
/// H(O), otherwise 1-Lax shock to the axis middle state followed by the
/// 2-Lax shock to s.
WaveCurveSolution solve_rp_origin(const ModelParams& p, const State& s);

/// All states m on H(s) with sigma(s, m) = lambda_family(m)
/// (right-characteristic shocks); non-convex flux folds yield several.
/// The local branch is traced by continuation; include_nonlocal adds a
/// contour pass over the whole triangle, catching partners on Hugoniot
/// branches detached from s.
std::vector<State> char_shock_candidates(const ModelParams& p, const State& s,
                                         int family = 1,
                                         bool include_nonlocal = false);

/// First right-characteristic partner along the locus; nullopt when the
/// characteristic defect never changes sign (state on the rarefaction side).
std::optional<State> char_shock_match(const ModelParams& p, const State& s,
                                      int family = 1);

/// Pairs (b, c) with sigma(b,c) = lambda_1(b) = lambda_1(c): the double
/// contact of the first family. b_side and c_side are index-aligned.
struct DoubleContactCurve {
  Polyline b_side;
  Polyline c_side;
  std::vector<double> sigmas;
};

/// Scans characteristic shocks from seed states on the rarefaction side of
/// each interior inflection branch. Empty for single-branch parameter sets.
DoubleContactCurve double_contact_locus(const ModelParams& p,
                                        int seeds_per_branch = 64);

/// Wave curve from s to the maximum packing line: composes 1-family
/// rarefactions, right-characteristic 1-Lax shocks, and double-contact
/// jumps until a vertex of the maximal line is reached. The reached
/// terminal becomes right_datum; `note` records whether it matches
/// requested_max when one is given. Unresolvable inputs (no characteristic
/// partner across the inflection) set `unresolved` instead of guessing.
WaveCurveSolution solve_rp_to_max(
    const ModelParams& p, const State& s,
    const std::optional<State>& requested_max = std::nullopt);

/// Self-similar evaluation: the state at each xi = x/t, with rarefactions
/// inverted by monotone eigenvalue lookup.
std::vector<State> sample_profile(const WaveCurveSolution& solution,
                                  const std::vector<double>& xi);

}  // namespace bised
