#include "bised/spectral.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bised {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Extended-mode eigenvalue of one family; NaN where the extension turns
// complex or is undefined.
double lambda_family_extended(const ModelParams& p, const State& s,
                              int family) {
  const double phi = total_concentration(s);
  const Vec2 u = slip_velocities(p, phi, FluxMode::extended);
  if (!u.allFinite()) return kNaN;
  const Vec2 v = u.array() - s.dot(u);
  const double mid =
      0.5 * (v[0] + v[1]) - 0.5 * (p.n[0] * s[0] * u[0] + p.n[1] * s[1] * u[1]);
  const double d = discriminant(p, s, FluxMode::extended);
  if (!std::isfinite(d) || d < 0.0) return kNaN;
  return family == 1 ? mid - 0.5 * std::sqrt(d) : mid + 0.5 * std::sqrt(d);
}

Vec2 eigenvector_formula(const ModelParams& p, const State& s, double lambda,
                         FluxMode mode) {
  const double phi = total_concentration(s);
  const Vec2 v = absolute_velocities(p, s, mode);
  const Vec2 du = slip_velocity_derivs(p, phi, mode);
  const double cross = s[0] * s[1] * (du[1] - du[0]);
  return Vec2(s[0] * (v[1] - lambda) + cross, s[1] * (v[0] - lambda) - cross);
}

Vec2 nullspace_direction(const Mat2& a) {
  Eigen::JacobiSVD<Mat2> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().col(1);
}

}  // namespace

Vec2 eigenvector(const ModelParams& p, const State& s, double lambda,
                 FluxMode mode) {
  const Mat2 j = jacobian(p, s, mode);
  const Mat2 shifted = j - lambda * Mat2::Identity();
  const double jscale = std::max(1.0, j.cwiseAbs().maxCoeff());

  Eigen::JacobiSVD<Mat2> svd(shifted, Eigen::ComputeFullV);
  const double s0 = svd.singularValues()[0];
  const double s1 = svd.singularValues()[1];
  if (s1 > kRankTol * jscale)
    throw std::domain_error("lambda is not an eigenvalue at this state");

  const Vec2 r = eigenvector_formula(p, s, lambda, mode);
  const double formula_scale =
      std::max({1.0, std::abs(lambda), s.cwiseAbs().maxCoeff()});
  if (r.norm() > 1e-13 * formula_scale) return r;

  if (s0 <= 1e-13 * jscale) {
    // J - lambda I vanishes (maximum packing line): every direction is an
    // eigenvector, return the contact direction
    return Vec2(1.0, -1.0);
  }
  return nullspace_direction(shifted);
}

SpectralData spectral_at(const ModelParams& p, const State& s, FluxMode mode) {
  SpectralData out;
  out.disc = discriminant(p, s, mode);
  if (mode == FluxMode::extended && out.disc < 0.0) {
    out.complex_pair = true;
    out.lambda1 = out.lambda2 = kNaN;
    out.r_reliable = false;
    return out;
  }
  std::tie(out.lambda1, out.lambda2) = eigenvalues(p, s, mode);
  out.coincident = std::abs(out.lambda2 - out.lambda1) <=
                   kCoincidenceTol *
                       std::max(1.0, std::abs(out.lambda1) +
                                         std::abs(out.lambda2));
  if (out.coincident) {
    out.r_reliable = false;
    const double mid = 0.5 * (out.lambda1 + out.lambda2);
    const Mat2 shifted = jacobian(p, s, mode) - mid * Mat2::Identity();
    out.r1 = out.r2 = nullspace_direction(shifted);
    return out;
  }
  out.r1 = eigenvector(p, s, out.lambda1, mode);
  out.r2 = eigenvector(p, s, out.lambda2, mode);
  return out;
}

std::pair<double, double> edge_eigenvalues(const ModelParams& p,
                                           const State& s, double tol) {
  int axis;
  if (std::abs(s[1]) <= tol)
    axis = 0;
  else if (std::abs(s[0]) <= tol)
    axis = 1;
  else
    throw std::invalid_argument("state is not on a coordinate axis");
  const double phi = s[axis];
  const Vec2 u = slip_velocities(p, phi);
  const double lambda_a = (1.0 - (1.0 + p.n[axis]) * phi) * u[axis];
  const double lambda_b = u[1 - axis] - phi * u[axis];
  return {lambda_a, lambda_b};
}

double edge_eigenvalue_deriv(const ModelParams& p, double phi, int axis) {
  detail::check_species<double>(axis);
  if (phi >= 1.0) throw std::domain_error("derivative defined for phi < 1");
  const double u = p.v_inf[axis] * hindered_settling(p, phi, axis);
  return p.n[axis] * ((1.0 + p.n[axis]) * phi - 2.0) * u / (1.0 - phi);
}

CoincidenceReport coincidence_points(const ModelParams& p) {
  CoincidenceReport rep;
  rep.r2_extremum_phi = r2_extremum(p);

  // phi1 axis: R1 is strictly decreasing on [0, 1/n1], bracket is immediate.
  {
    const double target = p.v_inf[1] / p.v_inf[0];
    double lo = 0.0, hi = 1.0 / p.n[0];
    double flo = coincidence_fn_axis1(p, lo) - target;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = coincidence_fn_axis1(p, mid) - target;
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    rep.points.push_back({State(root, 0.0), 0, root, false});
  }

  // phi2 axis: sign scan of R2 - v_inf1/v_inf2 over (0,1), 0/1/2 roots.
  {
    const double target = p.v_inf[0] / p.v_inf[1];
    const int cells = 2000;
    const double hi_end = 1.0 - 1e-9;
    double prev_phi = 1e-12;
    double prev = coincidence_fn_axis2(p, prev_phi) - target;
    for (int k = 1; k <= cells; ++k) {
      const double phi = k * hi_end / cells;
      const double cur = coincidence_fn_axis2(p, phi) - target;
      if ((prev < 0.0) != (cur < 0.0)) {
        double lo = prev_phi, hi = phi, flo = prev;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fmid = coincidence_fn_axis2(p, mid) - target;
          if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        rep.points.push_back({State(0.0, root), 1, root, false});
      }
      prev_phi = phi;
      prev = cur;
    }
  }

  for (auto& cp : rep.points)
    cp.quasi_umbilic = quasi_umbilic_check(p, cp.state);

  // Closed-form root-count shortcut for integer exponent gaps, kept as a
  // cross-reference; the scan above is what the report trusts.
  const double gap = p.n[0] - p.n[1];
  const double w = p.v_inf[0] / p.v_inf[1];
  const double n2 = p.n[1];
  if (std::abs(gap - 1.0) < 1e-12)
    rep.shortcut_predicted_axis2_roots = n2 > w ? 2 : 0;
  else if (std::abs(gap - 2.0) < 1e-12)
    rep.shortcut_predicted_axis2_roots =
        n2 > 2.0 * (w + std::sqrt(w * w - w)) ? 2 : 0;
  else if (std::abs(gap - 3.0) < 1e-12)
    rep.shortcut_predicted_axis2_roots =
        4.0 * n2 * n2 * n2 - 27.0 * w * (n2 - 1.0) * (n2 - 1.0) > 0.0 ? 2 : 0;
  return rep;
}

bool quasi_umbilic_check(const ModelParams& p, const State& s, FluxMode mode) {
  const auto [l1, l2] = eigenvalues(p, s, mode);
  if (std::abs(l2 - l1) >
      kCoincidenceTol * std::max(1.0, std::abs(l1) + std::abs(l2)))
    throw std::invalid_argument("state is not a coincidence point");
  const Mat2 j = jacobian(p, s, mode);
  const Mat2 shifted = j - 0.5 * (l1 + l2) * Mat2::Identity();
  Eigen::JacobiSVD<Mat2> svd(shifted);
  const double s0 = svd.singularValues()[0];
  const double s1 = svd.singularValues()[1];
  const double floor = 1e-12 * std::max(1.0, j.cwiseAbs().maxCoeff());
  return s0 > floor && s1 <= kRankTol * s0;
}

std::vector<Polyline> inflection_locus(const ModelParams& p, int family,
                                       int grid_n) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("family must be 1 or 2");
  const double h = 1e-6;

  auto oriented_r = [&](const State& s) -> Vec2 {
    const double lam = lambda_family_extended(p, s, family);
    if (!std::isfinite(lam)) return Vec2(kNaN, kNaN);
    Vec2 r = eigenvector_formula(p, s, lam, FluxMode::extended);
    if (r.norm() < 1e-13) {
      const Mat2 shifted =
          jacobian(p, s, FluxMode::extended) - lam * Mat2::Identity();
      r = nullspace_direction(shifted);
    }
    r.normalize();
    // fix a consistent orientation per family so the dot product below has
    // a well-defined sign field
    const Vec2 primary = family == 1 ? Vec2(1.0, 1.0) : Vec2(1.0, -1.0);
    const Vec2 secondary = family == 1 ? Vec2(1.0, -1.0) : Vec2(1.0, 1.0);
    double proj = r.dot(primary);
    if (std::abs(proj) < 1e-8) proj = r.dot(secondary);
    return proj < 0.0 ? Vec2(-r) : r;
  };

  auto g = [&](double x, double y) -> double {
    if (x + y > 1.0 - 1e-9) return kNaN;
    const State s(x, y);
    const Vec2 r = oriented_r(s);
    if (!r.allFinite()) return kNaN;
    const double lxp = lambda_family_extended(p, State(x + h, y), family);
    const double lxm = lambda_family_extended(p, State(x - h, y), family);
    const double lyp = lambda_family_extended(p, State(x, y + h), family);
    const double lym = lambda_family_extended(p, State(x, y - h), family);
    if (!std::isfinite(lxp) || !std::isfinite(lxm) || !std::isfinite(lyp) ||
        !std::isfinite(lym))
      return kNaN;
    const Vec2 grad((lxp - lxm) / (2.0 * h), (lyp - lym) / (2.0 * h));
    return grad.dot(r);
  };

  const Window win{0.0, 1.0, 0.0, 1.0};
  auto lines = trace_zero_contours(g, win, grid_n, grid_n);

  // Drop short fragments (eigenvalue sorting is only C0 at coincidence
  // points, which can shed one-cell slivers there), and sign changes
  // without transversal scale: near the maximum packing line the growth
  // rate grad(lambda).r cancels at leading order in (1-phi), leaving a
  // neutral band whose contours are not part of the inflection manifold.
  const double min_len = 4.0 / grid_n;
  const double min_scale = 5e-3;
  std::vector<Polyline> out;
  for (auto& line : lines) {
    double len = 0.0;
    for (size_t k = 1; k < line.size(); ++k)
      len += (line[k] - line[k - 1]).norm();
    if (len < min_len) continue;

    double scale = 0.0;
    const size_t stride = std::max<size_t>(1, line.size() / 8);
    for (size_t k = 1; k + 1 < line.size(); k += stride) {
      const Vec2 tangent = (line[k + 1] - line[k - 1]).normalized();
      const Vec2 normal(-tangent[1], tangent[0]);
      for (double off : {2.0 / grid_n, -2.0 / grid_n, 0.01, -0.01}) {
        const double v = g(line[k][0] + off * normal[0],
                           line[k][1] + off * normal[1]);
        if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
      }
    }
    if (scale < min_scale) continue;
    out.push_back(std::move(line));
  }
  return out;
}

int DiscriminantMap::sign_at(int ix, int iy) const {
  const double v = at(ix, iy);
  if (!std::isfinite(v) || v == 0.0) return 0;
  return v < 0.0 ? -1 : 1;
}

State DiscriminantMap::cell_center(int ix, int iy) const {
  return State(window.x_lo + (ix + 0.5) * window.width() / nx,
               window.y_lo + (iy + 0.5) * window.height() / ny);
}

DiscriminantMap extended_discriminant_map(const ModelParams& p,
                                          const Window& window,
                                          int resolution) {
  DiscriminantMap map;
  map.window = window;
  map.nx = map.ny = resolution;
  map.delta.resize(static_cast<size_t>(resolution) * resolution);
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix)
      map.delta[static_cast<size_t>(iy) * resolution + ix] =
          discriminant(p, map.cell_center(ix, iy), FluxMode::extended);
  return map;
}

bool elliptic_boundary_adjacent(const DiscriminantMap& map, const State& s,
                                int radius) {
  const int ix = static_cast<int>((s[0] - map.window.x_lo) / map.window.width() *
                                  map.nx);
  const int iy = static_cast<int>((s[1] - map.window.y_lo) /
                                  map.window.height() * map.ny);
  bool has_neg = false, has_pos = false;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int cx = ix + dx, cy = iy + dy;
      if (cx < 0 || cy < 0 || cx >= map.nx || cy >= map.ny) continue;
      const int sg = map.sign_at(cx, cy);
      has_neg |= sg < 0;
      has_pos |= sg > 0;
    }
  }
  return has_neg && has_pos;
}

}  // namespace bised
