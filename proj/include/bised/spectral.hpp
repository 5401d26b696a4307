#pragma once

// Spectral analysis of the 2x2 flux Jacobian: closed-form eigenvalues and
// eigenvectors, discriminant, axis eigenvalues, inflection and coincidence
// structure, hyperbolicity maps.

#include "bised/contour.hpp"
#include "bised/model.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace bised {

/// Relative gap below which two eigenvalues count as coincident.
inline constexpr double kCoincidenceTol = 1e-9;

/// Scaled singular-value threshold for the rank test at coincidence points.
inline constexpr double kRankTol = 1e-8;

/// Flux Jacobian J_ij = v_i delta_ij + phi_i u_ij with
/// u_ij = u_i' - Phi^T u' - u_j. Cut-off mode returns the zero matrix at
/// phi == phi_max where all velocities vanish.
template <typename Scalar>
Mat2T<Scalar> jacobian(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                       FluxMode mode = FluxMode::cut_off) {
  const Scalar phi = total_concentration(s);
  const Vec2T<Scalar> u = slip_velocities(p, phi, mode);
  const Vec2T<Scalar> du = slip_velocity_derivs(p, phi, mode);
  const Vec2T<Scalar> v = u.array() - s.dot(u);
  const Scalar sdu = s.dot(du);
  Mat2T<Scalar> j;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      j(i, k) = (i == k ? v[i] : Scalar(0)) + s[i] * (du[i] - sdu - u[k]);
  return j;
}

/// Central-difference Jacobian of the flux map, step h per component.
template <typename Scalar>
Mat2T<Scalar> numeric_jacobian(const ModelParamsT<Scalar>& p,
                               const Vec2T<Scalar>& s, Scalar h,
                               FluxMode mode = FluxMode::cut_off) {
  Mat2T<Scalar> j;
  for (int k = 0; k < 2; ++k) {
    Vec2T<Scalar> e = Vec2T<Scalar>::Zero();
    e[k] = h;
    j.col(k) = (flux(p, Vec2T<Scalar>(s + e), mode) -
                flux(p, Vec2T<Scalar>(s - e), mode)) /
               (Scalar(2) * h);
  }
  return j;
}

/// Discriminant of the Jacobian characteristic polynomial,
///   Delta = [(n1 phi1 - 1) u1 - (n2 phi2 - 1) u2]^2 + 4 n1 n2 phi1 phi2 u1 u2,
/// positive in the open triangle, possibly negative in extended mode.
template <typename Scalar>
Scalar discriminant(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                    FluxMode mode = FluxMode::cut_off) {
  const Vec2T<Scalar> u = slip_velocities(p, total_concentration(s), mode);
  const Scalar a = (p.n[0] * s[0] - Scalar(1)) * u[0] -
                   (p.n[1] * s[1] - Scalar(1)) * u[1];
  return a * a + Scalar(4) * p.n[0] * p.n[1] * s[0] * s[1] * u[0] * u[1];
}

/// Ordered eigenvalue pair
///   lambda_{1,2} = (v1+v2)/2 - (n1 phi1 u1 + n2 phi2 u2)/2 -+ sqrt(Delta)/2.
/// Requires Delta >= 0 (always true inside the triangle).
template <typename Scalar>
std::pair<Scalar, Scalar> eigenvalues(const ModelParamsT<Scalar>& p,
                                      const Vec2T<Scalar>& s,
                                      FluxMode mode = FluxMode::cut_off) {
  using std::sqrt;
  const Scalar phi = total_concentration(s);
  const Vec2T<Scalar> u = slip_velocities(p, phi, mode);
  const Vec2T<Scalar> v = u.array() - s.dot(u);
  const Scalar mid = (v[0] + v[1]) / Scalar(2) -
                     (p.n[0] * s[0] * u[0] + p.n[1] * s[1] * u[1]) / Scalar(2);
  const Scalar d = discriminant(p, s, mode);
  if (d < Scalar(0))
    throw std::domain_error("negative discriminant: complex eigenvalue pair");
  const Scalar half = sqrt(d) / Scalar(2);
  return {mid - half, mid + half};
}

/// Eigenvalues, eigenvectors and diagnostics at one state.
struct SpectralData {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double disc = 0.0;
  Vec2 r1 = Vec2::Zero();
  Vec2 r2 = Vec2::Zero();
  bool coincident = false;    ///< |lambda2-lambda1| below tolerance
  bool complex_pair = false;  ///< extended mode only; lambdas are NaN
  bool r_reliable = true;     ///< false near coincidence points
};

/// Right eigenvector for a given eigenvalue,
///   r = (phi1(v2-l) + phi1 phi2 (u2'-u1'), phi2(v1-l) - phi1 phi2 (u2'-u1')),
/// with null-space extraction from J - l I when the formula degenerates.
/// Throws when l is not an eigenvalue within tolerance.
Vec2 eigenvector(const ModelParams& p, const State& s, double lambda,
                 FluxMode mode = FluxMode::cut_off);

/// Full spectral snapshot; in extended mode a negative discriminant yields
/// complex_pair = true with NaN eigenvalues instead of an error.
SpectralData spectral_at(const ModelParams& p, const State& s,
                         FluxMode mode = FluxMode::cut_off);

/// Unordered axis eigenvalue pair (lambda_a, lambda_b) for a state on an
/// axis: lambda_a = (1-(1+n_i)phi) u_i, lambda_b = u_{other} - phi u_i.
/// Throws for interior states.
std::pair<double, double> edge_eigenvalues(const ModelParams& p,
                                           const State& s,
                                           double tol = kPhaseSpaceTol);

/// d lambda_a / d phi = n_i ((1+n_i) phi - 2) u_i / (1 - phi) on axis i.
double edge_eigenvalue_deriv(const ModelParams& p, double phi, int axis);

/// Axis inflection states (2/(1+n1), 0) and (0, 2/(1+n2)), both of the
/// first characteristic family.
template <typename Scalar>
std::array<Vec2T<Scalar>, 2> inflection_points_axes(
    const ModelParamsT<Scalar>& p) {
  return {Vec2T<Scalar>(Scalar(2) / (Scalar(1) + p.n[0]), Scalar(0)),
          Vec2T<Scalar>(Scalar(0), Scalar(2) / (Scalar(1) + p.n[1]))};
}

/// R1(phi) = (1 - n1 phi)(1 - phi)^(n1-n2); coincidence on the phi1 axis at
/// R1 = v_inf2/v_inf1.
template <typename Scalar>
Scalar coincidence_fn_axis1(const ModelParamsT<Scalar>& p, Scalar phi) {
  using std::pow;
  return (Scalar(1) - p.n[0] * phi) * pow(Scalar(1) - phi, p.n[0] - p.n[1]);
}

/// R2(phi) = (1 - n2 phi)(1 - phi)^(n2-n1); coincidence on the phi2 axis at
/// R2 = v_inf1/v_inf2. Defined for phi < 1.
template <typename Scalar>
Scalar coincidence_fn_axis2(const ModelParamsT<Scalar>& p, Scalar phi) {
  using std::pow;
  return (Scalar(1) - p.n[1] * phi) * pow(Scalar(1) - phi, p.n[1] - p.n[0]);
}

/// Location of the single extremum of R2; undefined when n1 - n2 == 1.
template <typename Scalar>
std::optional<Scalar> r2_extremum(const ModelParamsT<Scalar>& p) {
  const Scalar denom = (p.n[0] - p.n[1] - Scalar(1)) * p.n[1];
  if (std::abs(p.n[0] - p.n[1] - Scalar(1)) < Scalar(1e-12))
    return std::nullopt;
  return (p.n[0] - Scalar(2) * p.n[1]) / denom;
}

struct CoincidencePoint {
  State state;
  int axis = 0;  ///< 0: (phi,0), 1: (0,phi)
  double phi = 0.0;
  bool quasi_umbilic = false;
};

struct CoincidenceReport {
  std::vector<CoincidencePoint> points;
  std::optional<double> r2_extremum_phi;
  /// Closed-form count of axis-1 (phi2 axis) roots for integer exponent
  /// gaps n1-n2 in {1,2,3}; recorded next to the direct root count because
  /// the two can disagree (the direct scan is authoritative).
  std::optional<int> shortcut_predicted_axis2_roots;
};

/// All eigenvalue-coincidence states on the axes: the unique root of R1 on
/// [0, 1/n1] by bisection, plus every root of R2 = v_inf1/v_inf2 in (0,1)
/// found by a 2000-cell sign scan with bisection refinement.
CoincidenceReport coincidence_points(const ModelParams& p);

/// True iff J - lambda I has rank exactly 1 at a coincidence point (Jordan
/// block, non-diagonalizable). Throws when the eigenvalues are not
/// coincident at s.
bool quasi_umbilic_check(const ModelParams& p, const State& s,
                         FluxMode mode = FluxMode::cut_off);

/// Zero contour of grad(lambda_family) . r_family over the phase triangle,
/// traced by marching squares on an n x n grid with bisection refinement.
/// family is 1 or 2. May return several disjoint polylines.
std::vector<Polyline> inflection_locus(const ModelParams& p, int family,
                                       int grid_n = 400);

/// Sign field of the extended-mode discriminant over a rectangular window.
struct DiscriminantMap {
  Window window;
  int nx = 0, ny = 0;
  std::vector<double> delta;  ///< row-major, NaN where the extension fails

  double at(int ix, int iy) const { return delta[iy * nx + ix]; }
  /// -1, 0, +1; 0 also for undefined cells.
  int sign_at(int ix, int iy) const;
  State cell_center(int ix, int iy) const;
};

DiscriminantMap extended_discriminant_map(const ModelParams& p,
                                          const Window& window,
                                          int resolution);

/// Whether a state sits next to a sign change of the extended discriminant
/// (both a negative and a nonnegative cell within `radius` cells).
bool elliptic_boundary_adjacent(const DiscriminantMap& map, const State& s,
                                int radius = 2);

}  // namespace bised
