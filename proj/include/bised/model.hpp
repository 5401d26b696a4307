#pragma once

// Kinematic model of bidisperse sedimentation: two particle species settling
// in a viscous fluid, N = 2 system of conservation laws
//
//   d/dt phi_i + d/dx f_i(Phi) = 0,   f_i(Phi) = phi_i * v_i(Phi),
//
// with Richardson-Zaki hindered settling. All evaluation routines are pure
// free functions templated on the scalar type; Eigen vectors carry states.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bised {

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2T = Eigen::Matrix<Scalar, 2, 2>;

using Vec2 = Vec2T<double>;
using Mat2 = Mat2T<double>;

/// Point Phi = (phi1, phi2) in the concentration phase space.
using State = Vec2;

/// Default inclusive tolerance for phase-space membership tests.
inline constexpr double kPhaseSpaceTol = 1e-12;

/// How the constitutive law treats states outside the physical triangle.
enum class FluxMode {
  cut_off,   ///< slip velocities vanish for phi outside [0, phi_max]
  extended,  ///< power law evaluated as-is beyond the triangle
};

/// Model parameters: Stokes velocities v_inf, hindrance exponents n, and the
/// maximum packing concentration. Valid parameter sets satisfy
/// v_inf[0] > v_inf[1] > 0, n[0] > n[1] > 1 and phi_max == 1.
template <typename Scalar>
struct ModelParamsT {
  Vec2T<Scalar> v_inf;
  Vec2T<Scalar> n;
  Scalar phi_max = Scalar(1);
};

using ModelParams = ModelParamsT<double>;

/// Fast/slow species benchmark: v_inf = (1, 1/2), n = (4, 3).
inline ModelParams example1_params() {
  return ModelParams{Vec2(1.0, 0.5), Vec2(4.0, 3.0), 1.0};
}

/// Variant with widely split exponents: v_inf = (1, 1/2), n = (4.6, 1.5).
inline ModelParams example2_params() {
  return ModelParams{Vec2(1.0, 0.5), Vec2(4.6, 1.5), 1.0};
}

template <typename Scalar>
Scalar total_concentration(const Vec2T<Scalar>& s) {
  return s[0] + s[1];
}

template <typename Scalar>
bool in_phase_space(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                    Scalar tol = Scalar(kPhaseSpaceTol)) {
  return s[0] >= -tol && s[1] >= -tol &&
         total_concentration(s) <= p.phi_max + tol;
}

namespace detail {
template <typename Scalar>
void check_species(int species) {
  if (species != 0 && species != 1)
    throw std::invalid_argument("species index must be 0 or 1");
}
}  // namespace detail

/// Hindrance factor V_i(phi) = (1 - phi)^(n_i - 1), cut off to zero outside
/// [0, phi_max]. At phi == 1 the value is 0 directly, never 0^negative.
template <typename Scalar>
Scalar hindered_settling(const ModelParamsT<Scalar>& p, Scalar phi,
                         int species, FluxMode mode = FluxMode::cut_off) {
  detail::check_species<Scalar>(species);
  using std::pow;
  const Scalar expo = p.n[species] - Scalar(1);
  if (mode == FluxMode::cut_off) {
    if (phi < Scalar(0) || phi > p.phi_max) return Scalar(0);
    const Scalar base = std::max(Scalar(1) - phi, Scalar(0));
    if (base == Scalar(0)) return Scalar(0);
    return pow(base, expo);
  }
  // extended: power law as-is; NaN for negative base with non-integer n is
  // the caller's signal that the extension is undefined there
  return pow(Scalar(1) - phi, expo);
}

/// Slip velocity u_i(Phi) = v_inf_i * V_i(phi).
template <typename Scalar>
Scalar slip_velocity(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                     int species, FluxMode mode = FluxMode::cut_off) {
  return p.v_inf[species] *
         hindered_settling(p, total_concentration(s), species, mode);
}

template <typename Scalar>
Vec2T<Scalar> slip_velocities(const ModelParamsT<Scalar>& p, Scalar phi,
                              FluxMode mode = FluxMode::cut_off) {
  return Vec2T<Scalar>(p.v_inf[0] * hindered_settling(p, phi, 0, mode),
                       p.v_inf[1] * hindered_settling(p, phi, 1, mode));
}

/// d u_i / d phi = -v_inf_i (n_i - 1)(1 - phi)^(n_i - 2).
/// Singular at phi == 1 when n_i < 2; cut-off mode defines it as 0 there.
template <typename Scalar>
Vec2T<Scalar> slip_velocity_derivs(const ModelParamsT<Scalar>& p, Scalar phi,
                                   FluxMode mode = FluxMode::cut_off) {
  using std::pow;
  Vec2T<Scalar> d;
  for (int i = 0; i < 2; ++i) {
    const Scalar expo = p.n[i] - Scalar(2);
    if (mode == FluxMode::cut_off) {
      if (phi < Scalar(0) || phi >= p.phi_max) {
        d[i] = Scalar(0);
        continue;
      }
      d[i] = -p.v_inf[i] * (p.n[i] - Scalar(1)) *
             pow(std::max(Scalar(1) - phi, Scalar(0)), expo);
    } else {
      if (phi == Scalar(1) && p.n[i] < Scalar(2))
        throw std::domain_error(
            "slip velocity derivative singular at phi = 1 for n < 2");
      d[i] = -p.v_inf[i] * (p.n[i] - Scalar(1)) * pow(Scalar(1) - phi, expo);
    }
  }
  return d;
}

/// Absolute velocities v_i(Phi) = u_i(Phi) - Phi^T u(Phi).
template <typename Scalar>
Vec2T<Scalar> absolute_velocities(const ModelParamsT<Scalar>& p,
                                  const Vec2T<Scalar>& s,
                                  FluxMode mode = FluxMode::cut_off) {
  const Vec2T<Scalar> u = slip_velocities(p, total_concentration(s), mode);
  return u.array() - s.dot(u);
}

template <typename Scalar>
Scalar absolute_velocity(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                         int species, FluxMode mode = FluxMode::cut_off) {
  detail::check_species<Scalar>(species);
  return absolute_velocities(p, s, mode)[species];
}

/// Flux f_i(Phi) = phi_i * v_i(Phi); identically (0,0) outside the triangle
/// in cut-off mode.
template <typename Scalar>
Vec2T<Scalar> flux(const ModelParamsT<Scalar>& p, const Vec2T<Scalar>& s,
                   FluxMode mode = FluxMode::cut_off) {
  if (mode == FluxMode::cut_off && !in_phase_space(p, s, Scalar(0))) {
    const Scalar phi = total_concentration(s);
    // interior clamp: slip velocities vanish for phi > phi_max anyway, but
    // negative concentrations must not leak sign through phi_i * v_i
    if (s[0] < Scalar(0) || s[1] < Scalar(0) || phi > p.phi_max)
      return Vec2T<Scalar>::Zero();
  }
  return s.cwiseProduct(absolute_velocities(p, s, mode));
}

/// Outcome of checking a parameter set against the model requirements.
struct ParamsReport {
  bool valid = true;
  std::vector<std::string> violations;
  /// u_i'(phi)(1-phi) - u_i(phi) < 0 sampled on an interior grid.
  bool slip_decay_ok = true;
  /// Classical ordering v_inf1 > v_inf2 with n1 < n2; must fail here.
  bool classical_order_holds = false;
};

/// Checks finiteness/positivity and the orderings v_inf1 > v_inf2 > 0,
/// n1 > n2 > 1, phi_max == 1, and samples the slip-decay indicator.
inline ParamsReport validate_params(const ModelParams& p) {
  ParamsReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.valid = false;
    rep.violations.push_back(msg);
  };
  for (int i = 0; i < 2; ++i) {
    if (!std::isfinite(p.v_inf[i]) || p.v_inf[i] <= 0.0)
      fail("v_inf[" + std::to_string(i) + "] must be finite and positive");
    if (!std::isfinite(p.n[i]) || p.n[i] <= 0.0)
      fail("n[" + std::to_string(i) + "] must be finite and positive");
  }
  if (!std::isfinite(p.phi_max)) fail("phi_max must be finite");
  if (!rep.violations.empty()) return rep;

  if (!(p.v_inf[0] > p.v_inf[1])) fail("requires v_inf1 > v_inf2");
  if (!(p.v_inf[1] > 0.0)) fail("requires v_inf2 > 0");
  if (!(p.n[0] > p.n[1])) fail("requires n1 > n2");
  if (!(p.n[1] > 1.0)) fail("requires n2 > 1");
  if (p.phi_max != 1.0) fail("requires phi_max == 1");

  rep.classical_order_holds =
      p.v_inf[0] > p.v_inf[1] && p.v_inf[1] > 0.0 && p.n[0] < p.n[1];

  for (int k = 1; k < 200 && rep.slip_decay_ok; ++k) {
    const double phi = k / 200.0;
    const Vec2 u = slip_velocities(p, phi);
    const Vec2 du = slip_velocity_derivs(p, phi);
    for (int i = 0; i < 2; ++i)
      if (!(du[i] * (1.0 - phi) - u[i] < 0.0)) rep.slip_decay_ok = false;
  }
  return rep;
}

}  // namespace bised
