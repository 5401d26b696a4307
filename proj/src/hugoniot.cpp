#include "bised/hugoniot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace bised {
namespace {

constexpr double kNearBaseRadius = 1e-6;

inline double cross2(const Vec2& a, const Vec2& b) {
  return a[0] * b[1] - a[1] * b[0];
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

const char* to_string(ShockKind kind) {
  switch (kind) {
    case ShockKind::lax1:
      return "1-lax";
    case ShockKind::lax2:
      return "2-lax";
    case ShockKind::overcompressive:
      return "oc";
    case ShockKind::inadmissible:
      return "inadmissible";
  }
  return "?";
}

const char* to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::axis1:
      return "axis1";
    case BranchKind::axis2:
      return "axis2";
    case BranchKind::contact_star:
      return "contact_star";
    case BranchKind::contact_max:
      return "contact_max";
    case BranchKind::numeric:
      return "numeric";
  }
  return "?";
}

std::optional<double> shock_speed(const ModelParams& p, const State& s_minus,
                                  const State& s_plus, double tol) {
  const Vec2 dphi = s_plus - s_minus;
  const double denom = dphi.squaredNorm();
  if (denom == 0.0) return std::nullopt;
  const Vec2 df = flux(p, s_plus) - flux(p, s_minus);
  const double sigma = df.dot(dphi) / denom;
  if ((df - sigma * dphi).norm() > tol) return std::nullopt;
  return sigma;
}

ShockClass classify_shock(const ModelParams& p, const State& s_minus,
                          const State& s_plus) {
  const auto sigma_opt = shock_speed(p, s_minus, s_plus);
  if (!sigma_opt)
    throw std::invalid_argument("states are not on a common Hugoniot locus");
  const double sigma = *sigma_opt;
  const auto [l1m, l2m] = eigenvalues(p, s_minus);
  const auto [l1p, l2p] = eigenvalues(p, s_plus);
  const double tol = kCharTol * std::max(1.0, std::abs(sigma));

  ShockClass sc;
  sc.left_char_1 = near(sigma, l1m, tol);
  sc.left_char_2 = near(sigma, l2m, tol);
  sc.right_char_1 = near(sigma, l1p, tol);
  sc.right_char_2 = near(sigma, l2p, tol);

  const bool lax1 =
      l1p <= sigma + tol && sigma <= l1m + tol && sigma <= l2p + tol;
  const bool lax2 =
      l2p <= sigma + tol && sigma <= l2m + tol && l1m <= sigma + tol;
  const bool oc = l2p < sigma - tol && sigma < l1m - tol;
  if (lax1)
    sc.kind = ShockKind::lax1;
  else if (lax2)
    sc.kind = ShockKind::lax2;
  else if (oc)
    sc.kind = ShockKind::overcompressive;
  else
    sc.kind = ShockKind::inadmissible;
  return sc;
}

ShockClass classify_origin_segment(const ModelParams& p, const State& s) {
  const double membership = 1e-9;
  if (s.norm() < kNearBaseRadius)
    throw std::invalid_argument("zero jump: state coincides with the origin");

  const double phi_s = phi_star(p);
  const double phi_sig = phi_sigma(p);
  const double phi = total_concentration(s);

  auto lax1_rc2 = [] {
    ShockClass c;
    c.kind = ShockKind::lax1;
    c.right_char_2 = true;
    return c;
  };
  auto lax1_rc12 = [] {
    ShockClass c;
    c.kind = ShockKind::lax1;
    c.right_char_1 = c.right_char_2 = true;
    return c;
  };
  auto plain = [](ShockKind k) {
    ShockClass c;
    c.kind = k;
    return c;
  };

  if (std::abs(s[1]) <= membership && s[0] > 0.0 && s[0] <= 1.0 + membership) {
    if (near(phi, 1.0, kThresholdTieTol)) return lax1_rc12();
    if (near(phi, phi_s, kThresholdTieTol)) return lax1_rc2();
    if (near(phi, phi_sig, kThresholdTieTol)) {
      ShockClass c = plain(ShockKind::lax2);
      c.left_char_1 = true;
      return c;
    }
    if (phi < phi_sig) return plain(ShockKind::lax2);
    if (phi < phi_s) return plain(ShockKind::overcompressive);
    return plain(ShockKind::lax1);
  }
  if (std::abs(s[0]) <= membership && s[1] > 0.0 && s[1] <= 1.0 + membership) {
    if (near(phi, 1.0, kThresholdTieTol)) return lax1_rc12();
    if (near(phi, phi_s, kThresholdTieTol)) return lax1_rc2();
    if (phi < phi_s) return plain(ShockKind::lax1);
    return plain(ShockKind::overcompressive);
  }
  if (s[0] >= -membership && s[1] >= -membership) {
    if (near(phi, phi_s, membership)) return lax1_rc2();
    if (near(phi, 1.0, membership)) return lax1_rc12();
  }
  throw std::invalid_argument("state is not on the Hugoniot locus of O");
}

std::array<LocusBranch, 4> origin_locus(const ModelParams& p,
                                        int points_per_branch) {
  if (points_per_branch < 2)
    throw std::invalid_argument("need at least two points per branch");
  const double phi_s = phi_star(p);
  const double phi_sig = phi_sigma(p);

  auto axis_phis = [&](std::initializer_list<double> extra) {
    std::set<double> vals;
    for (int k = 1; k <= points_per_branch; ++k)
      vals.insert(static_cast<double>(k) / points_per_branch);
    vals.insert(kNearBaseRadius);
    for (double v : extra) vals.insert(v);
    return std::vector<double>(vals.begin(), vals.end());
  };

  std::array<LocusBranch, 4> out;

  out[0].kind = BranchKind::axis1;
  for (double phi : axis_phis({phi_sig, phi_s})) {
    const State s(phi, 0.0);
    out[0].points.push_back(s);
    out[0].speeds.push_back(absolute_velocity(p, s, 0));
    out[0].classes.push_back(classify_origin_segment(p, s));
  }

  out[1].kind = BranchKind::axis2;
  for (double phi : axis_phis({phi_s})) {
    const State s(0.0, phi);
    out[1].points.push_back(s);
    out[1].speeds.push_back(absolute_velocity(p, s, 1));
    out[1].classes.push_back(classify_origin_segment(p, s));
  }

  out[2].kind = BranchKind::contact_star;
  const double sigma_star = absolute_velocity(p, State(phi_s, 0.0), 0);
  for (int k = 0; k < points_per_branch; ++k) {
    const double t = static_cast<double>(k) / (points_per_branch - 1);
    const State s(t * phi_s, (1.0 - t) * phi_s);
    out[2].points.push_back(s);
    out[2].speeds.push_back(sigma_star);
    out[2].classes.push_back(classify_origin_segment(p, s));
  }

  out[3].kind = BranchKind::contact_max;
  for (int k = 0; k < points_per_branch; ++k) {
    const double t = static_cast<double>(k) / (points_per_branch - 1);
    const State s(t, 1.0 - t);
    out[3].points.push_back(s);
    out[3].speeds.push_back(0.0);
    out[3].classes.push_back(classify_origin_segment(p, s));
  }
  return out;
}

std::vector<LocusBranch> generic_locus(const ModelParams& p, const State& base,
                                       const Window& window, int resolution) {
  if (!in_phase_space(p, base))
    throw std::invalid_argument("base state outside phase space");
  const Vec2 f_base = flux(p, base);

  auto psi = [&](double x, double y) -> double {
    const State s(x, y);
    if (s[0] < -0.05 || s[1] < -0.05 ||
        total_concentration(s) > p.phi_max + 0.05)
      return std::numeric_limits<double>::quiet_NaN();
    return cross2(flux(p, s) - f_base, s - base);
  };

  auto lines = trace_zero_contours(psi, window, resolution, resolution, 60);

  // Degenerate boundary branches carry no sign change of psi (it vanishes
  // to even order there), so the contour cannot see them. When a whole
  // boundary line of the triangle satisfies the jump condition against the
  // base - the axes and the maximum packing line for the origin - append it
  // as an analytic branch.
  const std::array<std::pair<State, State>, 3> boundary_lines{
      {{State(0, 0), State(1, 0)},
       {State(0, 0), State(0, 1)},
       {State(1, 0), State(0, 1)}}};
  for (const auto& [from, to] : boundary_lines) {
    bool whole_line_on_locus = true;
    for (int k = 1; k <= 16 && whole_line_on_locus; ++k) {
      const State probe = from + (to - from) * (k / 17.0);
      if ((probe - base).norm() < kNearBaseRadius) continue;
      whole_line_on_locus = shock_speed(p, base, probe).has_value();
    }
    if (!whole_line_on_locus) continue;
    Polyline line;
    for (int k = 0; k <= resolution; ++k)
      line.push_back(from + (to - from) * (static_cast<double>(k) /
                                           resolution));
    lines.push_back(std::move(line));
  }

  std::vector<LocusBranch> out;
  for (auto& line : lines) {
    LocusBranch br;
    br.kind = BranchKind::numeric;
    br.base = base;
    br.points = std::move(line);
    br.speeds.assign(br.points.size(),
                     std::numeric_limits<double>::quiet_NaN());
    br.classes.resize(br.points.size());
    for (size_t k = 0; k < br.points.size(); ++k) {
      if ((br.points[k] - base).norm() < kNearBaseRadius) continue;
      if (auto sigma = shock_speed(p, base, br.points[k])) {
        br.speeds[k] = *sigma;
        br.classes[k] = classify_shock(p, base, br.points[k]);
      }
    }
    // fill the near-base gap (0/0 speed) from the nearest resolved sample
    for (size_t k = 0; k < br.points.size(); ++k) {
      if (std::isfinite(br.speeds[k])) continue;
      for (size_t step = 1; step < br.points.size(); ++step) {
        const size_t lo = k >= step ? k - step : br.points.size();
        const size_t hi = k + step;
        if (lo < br.points.size() && std::isfinite(br.speeds[lo])) {
          br.speeds[k] = br.speeds[lo];
          br.classes[k] = br.classes[lo];
          break;
        }
        if (hi < br.points.size() && std::isfinite(br.speeds[hi])) {
          br.speeds[k] = br.speeds[hi];
          br.classes[k] = br.classes[hi];
          break;
        }
      }
    }
    out.push_back(std::move(br));
  }
  return out;
}

bool triple_shock_check(const ModelParams& p, const State& s1, const State& s2,
                        const State& s3, double spread_tol) {
  const Vec2 a = s2 - s1, b = s3 - s1;
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  if (std::abs(cross2(a, b)) <= 1e-12 * scale * scale)
    throw std::invalid_argument("collinear triple: rule not applicable");

  const auto s12 = shock_speed(p, s1, s2);
  const auto s23 = shock_speed(p, s2, s3);
  const auto s13 = shock_speed(p, s1, s3);
  if (!s12 || !s23 || !s13)
    throw std::invalid_argument("triple is not mutually on Hugoniot loci");
  const double lo = std::min({*s12, *s23, *s13});
  const double hi = std::max({*s12, *s23, *s13});
  return hi - lo <= spread_tol;
}

}  // namespace bised
