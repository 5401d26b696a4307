#pragma once

// Rankine-Hugoniot machinery: shock speeds, the four-branch Hugoniot locus
// of the origin, generic locus tracing, Lax/over-compressive classification
// with closed-form thresholds, triple-shock rule.

#include "bised/contour.hpp"
#include "bised/model.hpp"
#include "bised/spectral.hpp"

#include <array>
#include <optional>
#include <vector>

namespace bised {

/// |sigma - lambda| <= kCharTol * max(1,|sigma|) marks a characteristic
/// contact between shock and eigenvalue.
inline constexpr double kCharTol = 1e-8;

/// Points this close to a classification threshold take the boundary label.
inline constexpr double kThresholdTieTol = 1e-10;

/// Residual norm accepted when deciding that two states lie on a common
/// Hugoniot locus.
inline constexpr double kLocusResidualTol = 1e-9;

enum class ShockKind { lax1, lax2, overcompressive, inadmissible };

const char* to_string(ShockKind kind);

struct ShockClass {
  ShockKind kind = ShockKind::inadmissible;
  bool left_char_1 = false;   ///< sigma == lambda_1(Phi-)
  bool left_char_2 = false;   ///< sigma == lambda_2(Phi-)
  bool right_char_1 = false;  ///< sigma == lambda_1(Phi+)
  bool right_char_2 = false;  ///< sigma == lambda_2(Phi+)
};

enum class BranchKind { axis1, axis2, contact_star, contact_max, numeric };

const char* to_string(BranchKind kind);

/// One parameterized branch of a Hugoniot locus with per-point speed and
/// classification against the branch's base state.
struct LocusBranch {
  BranchKind kind = BranchKind::numeric;
  State base = State::Zero();
  std::vector<State> points;
  std::vector<double> speeds;
  std::vector<ShockClass> classes;
};

/// Componentwise f(Phi+) - f(Phi-) - sigma (Phi+ - Phi-).
inline Vec2 rh_residual(const ModelParams& p, const State& s_minus,
                        const State& s_plus, double sigma) {
  return flux(p, s_plus) - flux(p, s_minus) - sigma * (s_plus - s_minus);
}

/// Least-squares jump speed, accepted only when the residual confirms the
/// pair lies on a common Hugoniot locus.
std::optional<double> shock_speed(const ModelParams& p, const State& s_minus,
                                  const State& s_plus,
                                  double tol = kLocusResidualTol);

/// Total concentration of the interior contact manifold,
/// phi* = 1 - (v_inf2/v_inf1)^(1/(n1-n2)).
template <typename Scalar>
Scalar phi_star(const ModelParamsT<Scalar>& p) {
  using std::pow;
  return Scalar(1) -
         pow(p.v_inf[1] / p.v_inf[0], Scalar(1) / (p.n[0] - p.n[1]));
}

/// Axis-1 threshold where sigma(O,.) crosses lambda_1(O):
/// phi_sigma = 1 - (v_inf2/v_inf1)^(1/n1).
template <typename Scalar>
Scalar phi_sigma(const ModelParamsT<Scalar>& p) {
  using std::pow;
  return Scalar(1) - pow(p.v_inf[1] / p.v_inf[0], Scalar(1) / p.n[0]);
}

/// Lax / over-compressive classification of the jump between two states on
/// a common locus, with characteristic-contact flags. Throws when the pair
/// fails the locus residual test.
ShockClass classify_shock(const ModelParams& p, const State& s_minus,
                          const State& s_plus);

/// Closed-form classification of a state on one of the four branches of
/// H(O) by the thresholds phi_sigma and phi*; ties within
/// kThresholdTieTol take the characteristic boundary label. Throws for
/// states off H(O) (including the origin itself).
ShockClass classify_origin_segment(const ModelParams& p, const State& s);

/// The four branches of H(O): both axes with sigma = v_i(Phi), and the two
/// contact lines with constant sigma. Threshold states are inserted next to
/// the uniform samples.
std::array<LocusBranch, 4> origin_locus(const ModelParams& p,
                                        int points_per_branch);

/// Traces H(base) inside a window as the zero contour of
/// det[f(Phi)-f(base), Phi-base], with per-point speed and class.
std::vector<LocusBranch> generic_locus(const ModelParams& p, const State& base,
                                       const Window& window, int resolution);

/// Equality of the three pairwise shock speeds among non-collinear,
/// mutually connected states. Throws for collinear triples or pairs off a
/// common locus.
bool triple_shock_check(const ModelParams& p, const State& s1, const State& s2,
                        const State& s3, double spread_tol = 1e-9);

}  // namespace bised
