#include "bised/riemann.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bised {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxLineStop = 1e-9;  // stop integration at phi >= 1 - this

inline double cross2(const Vec2& a, const Vec2& b) {
  return a[0] * b[1] - a[1] * b[0];
}

// Eigenvalue of one family with the algebraic (extension-friendly) formula;
// NaN outside the hyperbolic region.
double lambda_family(const ModelParams& p, const State& s, int family) {
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

double eigen_gap(const ModelParams& p, const State& s) {
  const double d = discriminant(p, s, FluxMode::extended);
  return d >= 0.0 ? std::sqrt(d) : 0.0;
}

// Unit eigenvector of the family, sign-aligned with ref when given.
Vec2 family_direction(const ModelParams& p, const State& s, int family,
                      const Vec2& ref = Vec2::Zero()) {
  const double lam = lambda_family(p, s, family);
  const double phi = total_concentration(s);
  const Vec2 v = [&] {
    const Vec2 u = slip_velocities(p, phi, FluxMode::extended);
    return Vec2(u.array() - s.dot(u));
  }();
  const Vec2 du = slip_velocity_derivs(p, phi, FluxMode::extended);
  const double cross = s[0] * s[1] * (du[1] - du[0]);
  Vec2 r(s[0] * (v[1] - lam) + cross, s[1] * (v[0] - lam) - cross);
  if (r.norm() < 1e-13) {
    const Mat2 shifted =
        jacobian(p, s, FluxMode::extended) - lam * Mat2::Identity();
    Eigen::JacobiSVD<Mat2> svd(shifted, Eigen::ComputeFullV);
    r = svd.matrixV().col(1);
  }
  r.normalize();
  if (ref.squaredNorm() > 0.0 && r.dot(ref) < 0.0) r = -r;
  return r;
}

Vec2 grad_lambda(const ModelParams& p, const State& s, int family,
                 double h = 1e-7) {
  const double lxp = lambda_family(p, State(s[0] + h, s[1]), family);
  const double lxm = lambda_family(p, State(s[0] - h, s[1]), family);
  const double lyp = lambda_family(p, State(s[0], s[1] + h), family);
  const double lym = lambda_family(p, State(s[0], s[1] - h), family);
  return Vec2((lxp - lxm) / (2.0 * h), (lyp - lym) / (2.0 * h));
}

// Direction of increasing lambda_family at s; zero vector when the growth
// rate vanishes below tol (inflection).
Vec2 lambda_increasing_direction(const ModelParams& p, const State& s,
                                 int family) {
  const Vec2 r = family_direction(p, s, family);
  const double growth = grad_lambda(p, s, family).dot(r);
  return growth >= 0.0 ? r : Vec2(-r);
}

bool inside_triangle(const ModelParams& p, const State& s, double slack) {
  return s[0] >= -slack && s[1] >= -slack &&
         total_concentration(s) <= p.phi_max + slack;
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::dx_minus:
      return "dx_minus";
    case Region::dx_plus:
      return "dx_plus";
    case Region::on_contact:
      return "on_contact";
  }
  return "?";
}

const char* to_string(WaveKind k) {
  switch (k) {
    case WaveKind::shock:
      return "shock";
    case WaveKind::rarefaction:
      return "rarefaction";
    case WaveKind::contact:
      return "contact";
  }
  return "?";
}

Region region_of(const ModelParams& p, const State& s, double tol) {
  const double phi = total_concentration(s);
  const double ps = phi_star(p);
  if (std::abs(phi - ps) <= tol) return Region::on_contact;
  return phi < ps ? Region::dx_minus : Region::dx_plus;
}

RarefactionPath rarefaction_integrate(const ModelParams& p, const State& s0,
                                      int family, int direction,
                                      const RarefactionPredicate& predicate) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("family must be 1 or 2");
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("direction must be +1 or -1");

  RarefactionPath out;
  const double err_tol = 1e-10;
  const double h_min = 1e-12;
  const double coincidence_guard = 1e2 * kCoincidenceTol;

  // relative gap: the whole maximum packing line has lambda1 == lambda2 == 0,
  // so the guard must compare against the local eigenvalue scale, not 1
  auto gap_small = [&](const State& s) {
    const double l1 = lambda_family(p, s, 1);
    const double l2 = lambda_family(p, s, 2);
    return eigen_gap(p, s) <=
           coincidence_guard * (std::abs(l1) + std::abs(l2));
  };

  State y = s0;
  if (gap_small(y)) {
    out.stop = RarefactionStop::coincidence;
    return out;
  }

  Vec2 dir = family_direction(p, y, family);
  {
    const double growth = grad_lambda(p, y, family).dot(dir) * direction;
    if (growth < 0.0) dir = -dir;
  }

  out.path.push_back(y);
  out.lambdas.push_back(lambda_family(p, y, family));

  auto field = [&](const State& s, const Vec2& ref) {
    return family_direction(p, s, family, ref);
  };

  // Cash-Karp embedded RK45 on the unit eigenvector field
  auto try_step = [&](const State& y0, const Vec2& ref, double h, State& y1,
                      double& err) {
    const Vec2 k1 = field(y0, ref);
    const Vec2 k2 = field(y0 + h * (0.2 * k1), ref);
    const Vec2 k3 = field(y0 + h * (3.0 / 40 * k1 + 9.0 / 40 * k2), ref);
    const Vec2 k4 =
        field(y0 + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3), ref);
    const Vec2 k5 = field(
        y0 + h * (-11.0 / 54 * k1 + 2.5 * k2 - 70.0 / 27 * k3 + 35.0 / 27 * k4),
        ref);
    const Vec2 k6 =
        field(y0 + h * (1631.0 / 55296 * k1 + 175.0 / 512 * k2 +
                        575.0 / 13824 * k3 + 44275.0 / 110592 * k4 +
                        253.0 / 4096 * k5),
              ref);
    const State y5 = y0 + h * (37.0 / 378 * k1 + 250.0 / 621 * k3 +
                               125.0 / 594 * k4 + 512.0 / 1771 * k6);
    const State y4 =
        y0 + h * (2825.0 / 27648 * k1 + 18575.0 / 48384 * k3 +
                  13525.0 / 55296 * k4 + 277.0 / 14336 * k5 + 0.25 * k6);
    y1 = y5;
    err = (y5 - y4).norm();
    return y1.allFinite();
  };

  double h = 1e-4;
  double arc = 0.0;
  out.stop = RarefactionStop::stalled;
  for (int step = 0; step < 200000 && arc < 4.0; ++step) {
    State y1;
    double err = 0.0;
    if (!try_step(y, dir, h, y1, err) || err > err_tol) {
      h = std::max(h * std::max(0.2, 0.9 * std::pow(err_tol / (err + 1e-300),
                                                    0.2)),
                   h_min);
      if (h <= h_min) {
        out.stop = RarefactionStop::stalled;
        break;
      }
      continue;
    }

    // boundary events: shrink onto the triangle edge / max line
    if (!inside_triangle(p, y1, 1e-12) ||
        total_concentration(y1) >= p.phi_max - kMaxLineStop) {
      if (h > h_min * 4.0) {
        h *= 0.5;
        continue;
      }
      const bool at_max =
          total_concentration(y1) >= p.phi_max - 10 * kMaxLineStop;
      y = y1;
      out.path.push_back(y);
      out.lambdas.push_back(lambda_family(p, y, family));
      out.stop =
          at_max ? RarefactionStop::max_line : RarefactionStop::boundary;
      return out;
    }

    if (gap_small(y1)) {
      out.stop = RarefactionStop::coincidence;
      return out;
    }

    // orientation flip means the step crossed the inflection manifold
    const Vec2 dir1 = field(y1, dir);
    const double growth = grad_lambda(p, y1, family).dot(dir1) * direction;
    if (growth < 0.0) {
      if (h > h_min * 4.0) {
        h *= 0.5;
        continue;
      }
      out.stop = RarefactionStop::inflection;
      return out;
    }

    const double lam1 = lambda_family(p, y1, family);
    if (predicate && predicate(y1, lam1)) {
      if (h > h_min * 4.0) {
        h *= 0.5;
        continue;
      }
      y = y1;
      out.path.push_back(y);
      out.lambdas.push_back(lam1);
      out.stop = RarefactionStop::predicate;
      return out;
    }

    arc += h;
    y = y1;
    dir = dir1;
    out.path.push_back(y);
    out.lambdas.push_back(lam1);
    h = std::min(h * std::min(5.0, 0.9 * std::pow(err_tol / (err + 1e-300),
                                                  0.2)),
                 5e-3);
  }
  return out;
}

State middle_state_origin(const ModelParams& p, const State& s) {
  if (!in_phase_space(p, s))
    throw std::invalid_argument("state outside phase space");
  if (s[0] <= 1e-9 || s[1] <= 1e-9)
    throw std::invalid_argument("middle-state search expects interior states");
  const Region reg = region_of(p, s);
  if (reg == Region::on_contact)
    throw std::invalid_argument(
        "state on the contact line: single-shock solution, no middle state");

  const double ps = phi_star(p);
  const int axis = reg == Region::dx_minus ? 1 : 0;
  const double lo = (reg == Region::dx_minus ? 0.0 : ps) + 1e-12;
  const double hi = (reg == Region::dx_minus ? ps : 1.0) - 1e-12;

  auto candidate = [&](double t) {
    return axis == 1 ? State(0.0, t) : State(t, 0.0);
  };
  const Vec2 f_s = flux(p, s);
  auto det = [&](double t) {
    const State m = candidate(t);
    return cross2(f_s - flux(p, m), s - m);
  };

  const int cells = 512;
  std::vector<double> roots;
  double prev_t = lo, prev_v = det(lo);
  for (int k = 1; k <= cells; ++k) {
    const double t = lo + (hi - lo) * k / cells;
    const double v = det(t);
    if ((prev_v < 0.0) != (v < 0.0)) {
      double a = prev_t, b = t, fa = prev_v;
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = det(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_v = v;
  }

  State best = State::Zero();
  double best_margin = -1.0;
  for (double t : roots) {
    const State m = candidate(t);
    const double sigma1 = absolute_velocity(p, m, axis);
    const auto sigma2 = shock_speed(p, m, s);
    if (!sigma2) continue;
    if (*sigma2 + 1e-9 < sigma1) continue;
    if (classify_shock(p, m, s).kind != ShockKind::lax2) continue;
    const double margin = *sigma2 - sigma1;
    if (margin > best_margin) {
      best_margin = margin;
      best = m;
    }
  }
  if (best_margin < 0.0) {
    std::ostringstream os;
    os << "no admissible middle state for (" << s[0] << ", " << s[1]
       << "); scanned " << roots.size() << " collinearity roots on axis "
       << axis << " in [" << lo << ", " << hi << "]";
    throw std::runtime_error(os.str());
  }
  return best;
}

namespace {

WaveSegment make_shock_segment(const State& left, const State& right,
                               double sigma, const ShockClass& cls) {
  WaveSegment seg;
  seg.kind = WaveKind::shock;
  seg.family = cls.kind == ShockKind::lax2 ? 2 : 1;
  seg.left = left;
  seg.right = right;
  seg.speed_lo = seg.speed_hi = sigma;
  seg.shock_class = cls;
  seg.char_left = cls.left_char_1 || cls.left_char_2;
  seg.char_right = cls.right_char_1 || cls.right_char_2;
  seg.path = {left, right};
  return seg;
}

// Single-shock solution for a right state on H(O).
WaveCurveSolution origin_single_shock(const ModelParams& p, const State& s) {
  WaveCurveSolution sol;
  sol.left_datum = State::Zero();
  sol.right_datum = s;
  const ShockClass cls = classify_origin_segment(p, s);
  double sigma;
  const double phi = total_concentration(s);
  if (std::abs(s[1]) <= 1e-9)
    sigma = absolute_velocity(p, s, 0);
  else if (std::abs(s[0]) <= 1e-9)
    sigma = absolute_velocity(p, s, 1);
  else if (std::abs(phi - p.phi_max) <= 1e-9)
    sigma = 0.0;
  else
    sigma = absolute_velocity(p, s, 0);  // contact line: v1 == v2
  sol.segments.push_back(make_shock_segment(State::Zero(), s, sigma, cls));
  return sol;
}

}  // namespace

WaveCurveSolution solve_rp_origin(const ModelParams& p, const State& s) {
  if (!in_phase_space(p, s))
    throw std::invalid_argument("right state outside phase space");
  WaveCurveSolution sol;
  sol.left_datum = State::Zero();
  sol.right_datum = s;
  if (s.norm() < 1e-12) {
    sol.note = "zero jump";
    return sol;
  }

  const bool on_axis = std::abs(s[0]) <= 1e-9 || std::abs(s[1]) <= 1e-9;
  const double phi = total_concentration(s);
  const bool on_contact = std::abs(phi - phi_star(p)) <= 1e-9 ||
                          std::abs(phi - p.phi_max) <= 1e-9;
  if (on_axis || on_contact) return origin_single_shock(p, s);

  const State m = middle_state_origin(p, s);
  const int axis = std::abs(m[1]) <= 1e-12 ? 0 : 1;
  const double sigma1 = absolute_velocity(p, m, axis);
  const double sigma2 = *shock_speed(p, m, s);

  sol.middle_states.push_back(m);
  sol.segments.push_back(make_shock_segment(State::Zero(), m, sigma1,
                                            classify_origin_segment(p, m)));
  sol.segments.push_back(
      make_shock_segment(m, s, sigma2, classify_shock(p, m, s)));
  return sol;
}

namespace {

// Incremental trace of the Hugoniot locus of `base`, heading out of `base`
// along `tangent0`, as an ordered point list. The corrector solves the
// jump-collinearity determinant on the normal line at each predictor.
class LocusTracer {
 public:
  LocusTracer(const ModelParams& p, const State& base)
      : p_(p), base_(base), f_base_(flux(p, base)) {}

  // Masked outside the triangle: the cut-off flux vanishes there, which
  // would leave a spurious straight pseudo-locus for the corrector to grab.
  double psi(const State& s) const {
    if (!inside_triangle(p_, s, 0.0))
      return std::numeric_limits<double>::quiet_NaN();
    return cross2(flux(p_, s) - f_base_, s - base_);
  }

  // One predictor-corrector move from `from` along `tangent`; returns the
  // corrected point or nullopt when no bracket exists at this step size.
  std::optional<State> advance(const State& from, const Vec2& tangent,
                               double ds) const {
    const State pred = from + ds * tangent;
    const Vec2 normal(-tangent[1], tangent[0]);
    const int samples = 24;
    const double wmax = 0.75 * ds;
    double prev_w = -wmax;
    double prev_v = psi(pred + prev_w * normal);
    std::optional<std::pair<double, double>> bracket;
    double bracket_dist = 0.0;
    for (int k = 1; k <= samples; ++k) {
      const double w = -wmax + 2.0 * wmax * k / samples;
      const double v = psi(pred + w * normal);
      if (std::isfinite(prev_v) && std::isfinite(v) &&
          (prev_v < 0.0) != (v < 0.0)) {
        // prefer the bracket nearest the predictor
        const double dist = std::abs(0.5 * (prev_w + w));
        if (!bracket || dist < bracket_dist) {
          bracket = {prev_w, w};
          bracket_dist = dist;
        }
      }
      prev_w = w;
      prev_v = v;
    }
    if (!bracket) return std::nullopt;
    double a = bracket->first, b = bracket->second;
    double fa = psi(pred + a * normal);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = psi(pred + mid * normal);
      if (!std::isfinite(fm)) break;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return pred + 0.5 * (a + b) * normal;
  }

  // Ordered trace until the triangle boundary or until steps stall.
  std::vector<State> trace(const Vec2& tangent0, double ds,
                           int max_steps) const {
    std::vector<State> pts{base_};
    Vec2 tangent = tangent0.normalized();
    State cur = base_;
    double step = ds;
    for (int k = 0; k < max_steps; ++k) {
      auto next = advance(cur, tangent, step);
      if (!next) {
        step *= 0.5;
        if (step < 1e-8) break;
        continue;
      }
      if (!inside_triangle(p_, *next, 1e-12)) {
        // clip the final move onto the triangle boundary
        State a = cur, b = *next;
        for (int it = 0; it < 60; ++it) {
          const State mid = 0.5 * (a + b);
          (inside_triangle(p_, mid, 1e-12) ? a : b) = mid;
        }
        pts.push_back(a);
        break;
      }
      tangent = (*next - cur).normalized();
      cur = *next;
      pts.push_back(cur);
      step = std::min(step * 1.5, ds);
    }
    return pts;
  }

 private:
  const ModelParams& p_;
  State base_;
  Vec2 f_base_;
};

double least_squares_sigma(const ModelParams& p, const State& a,
                           const State& b) {
  const Vec2 dphi = b - a;
  return (flux(p, b) - flux(p, a)).dot(dphi) / dphi.squaredNorm();
}

}  // namespace

namespace {

// Projects a point near the locus back onto it by bisecting psi along the
// given normal direction, expanding the window until a bracket appears.
std::optional<State> snap_to_locus(const LocusTracer& tracer, const State& q,
                                   const Vec2& normal, double w) {
  for (int expand = 0; expand < 6; ++expand, w *= 2.0) {
    double prev_t = -w;
    double prev_v = tracer.psi(q + prev_t * normal);
    for (int k = 1; k <= 16; ++k) {
      const double t = -w + 2.0 * w * k / 16;
      const double v = tracer.psi(q + t * normal);
      if (std::isfinite(prev_v) && std::isfinite(v) &&
          (prev_v < 0.0) != (v < 0.0)) {
        double a = prev_t, b = t, fa = prev_v;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = tracer.psi(q + mid * normal);
          if (!std::isfinite(fm)) break;
          if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        return q + 0.5 * (a + b) * normal;
      }
      prev_t = t;
      prev_v = v;
    }
  }
  return std::nullopt;
}

// Refined right-characteristic crossings of g = sigma - lambda_family along
// an ordered point sequence lying on (or grid-close to) H(s).
void collect_char_crossings(const ModelParams& p, const State& s, int family,
                            const LocusTracer& tracer,
                            const std::vector<State>& pts,
                            std::vector<State>* out) {
  auto g = [&](const State& q) {
    return least_squares_sigma(p, s, q) - lambda_family(p, q, family);
  };
  const double near_field = 1e-3;
  for (size_t k = 1; k < pts.size(); ++k) {
    if ((pts[k - 1] - s).norm() < near_field ||
        (pts[k] - s).norm() < near_field)
      continue;
    const double ga = g(pts[k - 1]);
    const double gb = g(pts[k]);
    if (!std::isfinite(ga) || !std::isfinite(gb)) continue;
    if ((ga < 0.0) == (gb < 0.0)) continue;

    // chord bisection with every iterate snapped back onto the locus along
    // the chord normal
    State a = pts[k - 1], b = pts[k];
    const Vec2 chord = (b - a).normalized();
    const Vec2 normal(-chord[1], chord[0]);
    const double w0 = 0.5 * (b - a).norm();
    const bool a_neg = ga < 0.0;
    for (int it = 0; it < 60 && (b - a).norm() > 1e-15; ++it) {
      const auto mid = snap_to_locus(tracer, 0.5 * (a + b), normal, w0);
      if (!mid) break;
      const double gm = g(*mid);
      if (!std::isfinite(gm)) break;
      if ((gm < 0.0) == a_neg)
        a = *mid;
      else
        b = *mid;
    }
    const double res = std::abs(g(b));
    if (std::isfinite(res) && res < 1e-7) out->push_back(b);
  }
}

}  // namespace

std::vector<State> char_shock_candidates(const ModelParams& p, const State& s,
                                         int family, bool include_nonlocal) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("family must be 1 or 2");
  LocusTracer tracer(p, s);

  // local branch: head toward increasing total concentration along the
  // family tangent
  Vec2 t0 = family_direction(p, s, family);
  if (t0.sum() < 0.0) t0 = -t0;
  std::vector<State> out;
  collect_char_crossings(p, s, family, tracer, tracer.trace(t0, 2e-3, 4000),
                         &out);

  if (include_nonlocal) {
    // the Hugoniot locus can carry branches detached from s (they carry the
    // far characteristic partners for states near the axes); a coarse
    // contour pass over the triangle catches them
    auto psi_field = [&](double x, double y) {
      return tracer.psi(State(x, y));
    };
    const auto lines =
        trace_zero_contours(psi_field, Window{0, 1, 0, 1}, 220, 220);
    for (const auto& line : lines)
      collect_char_crossings(p, s, family, tracer, line, &out);

    // dedupe across local and contour passes
    std::vector<State> unique;
    for (const auto& c : out) {
      bool seen = false;
      for (const auto& u : unique) seen |= (u - c).norm() < 1e-5;
      if (!seen) unique.push_back(c);
    }
    out = std::move(unique);
  }
  return out;
}

std::optional<State> char_shock_match(const ModelParams& p, const State& s,
                                      int family) {
  const auto cands = char_shock_candidates(p, s, family, false);
  if (cands.empty()) return std::nullopt;
  return cands.front();
}

namespace {

// Best doubly-characteristic attachment from q: among the right-
// characteristic partners c (sigma(q,c) = lambda_family(c) by
// construction), the one whose speed lies lowest relative to
// lambda_family(q). The defect sigma - lambda_family(q) vanishes exactly on
// the double-contact curve.
struct Attachment {
  State partner;
  double sigma = 0.0;
  double defect = 0.0;
};

std::optional<Attachment> attachment_defect(const ModelParams& p,
                                            const State& q, int family) {
  const auto cands = char_shock_candidates(p, q, family, false);
  if (cands.empty()) return std::nullopt;
  const auto [l1, l2] = eigenvalues(p, q);
  const double lam = family == 1 ? l1 : l2;
  std::optional<Attachment> best;
  for (const State& c : cands) {
    const double sigma = least_squares_sigma(p, q, c);
    const double defect = sigma - lam;
    if (!best || defect < best->defect) best = Attachment{c, sigma, defect};
  }
  return best;
}

}  // namespace

DoubleContactCurve double_contact_locus(const ModelParams& p,
                                        int seeds_per_branch) {
  DoubleContactCurve out;
  const auto branches = inflection_locus(p, 1, 300);

  auto defect = [&](const State& q) -> double {
    const auto att = attachment_defect(p, q, 1);
    return att ? att->defect : kNaN;
  };

  for (const auto& branch : branches) {
    if (branch.size() < 8) continue;

    // sides from which rarefactions run INTO the branch (lambda increasing
    // toward it); a lambda-maximum inflection is approached from both
    auto approach_sides = [&](size_t k) {
      std::vector<Vec2> sides;
      const State q = branch[k];
      const Vec2 tangent = (branch[std::min(k + 1, branch.size() - 1)] -
                            branch[k > 0 ? k - 1 : 0])
                               .normalized();
      const Vec2 n(-tangent[1], tangent[0]);
      for (const Vec2& cand : {Vec2(n), Vec2(-n)}) {
        const State probe = q + 0.02 * cand;
        if (!inside_triangle(p, probe, 0.0)) continue;
        const Vec2 d = lambda_increasing_direction(p, probe, 1);
        if (d.dot(-cand) > 0.0) sides.push_back(cand);
      }
      return sides;
    };

    const size_t lo = branch.size() / 10;
    const size_t hi = branch.size() - 1 - branch.size() / 10;
    for (int seed = 0; seed < seeds_per_branch; ++seed) {
      const size_t k =
          lo + static_cast<size_t>((hi - lo) * (seed + 0.5) / seeds_per_branch);
      for (const Vec2& away : approach_sides(k)) {
        // walk away from the branch until the attachment defect changes
        // sign, then bisect on the probe ray
        const State q0 = branch[k] + 0.002 * away;
        double t_prev = 0.0;
        double g_prev = defect(q0);
        if (!std::isfinite(g_prev)) continue;
        std::optional<std::pair<double, double>> bracket;
        for (int j = 1; j <= 28; ++j) {
          const double t = j <= 4 ? 0.004 * j : 0.02 * (j - 4) + 0.016;
          const State q = q0 + t * away;
          if (!inside_triangle(p, q, 0.0)) break;
          const double gq = defect(q);
          if (!std::isfinite(gq)) break;
          if ((g_prev < 0.0) != (gq < 0.0)) {
            bracket = {t_prev, t};
            break;
          }
          t_prev = t;
          g_prev = gq;
        }
        if (!bracket) continue;
        double a = bracket->first, b = bracket->second;
        const double da = defect(q0 + a * away);
        for (int it = 0; it < 50 && b - a > 1e-13; ++it) {
          const double mid = 0.5 * (a + b);
          const double gm = defect(q0 + mid * away);
          if (!std::isfinite(gm)) break;
          ((gm < 0.0) == (da < 0.0) ? a : b) = mid;
        }
        const State b_state = q0 + 0.5 * (a + b) * away;
        const auto att = attachment_defect(p, b_state, 1);
        if (!att) continue;
        if (std::abs(att->sigma - eigenvalues(p, b_state).first) > 1e-8)
          continue;
        if (std::abs(att->sigma - eigenvalues(p, att->partner).first) > 1e-8)
          continue;
        out.b_side.push_back(b_state);
        out.c_side.push_back(att->partner);
        out.sigmas.push_back(att->sigma);
        break;
      }
    }
  }
  return out;
}

namespace {

WaveSegment make_rarefaction_segment(int family, const RarefactionPath& rp) {
  WaveSegment seg;
  seg.kind = WaveKind::rarefaction;
  seg.family = family;
  seg.left = rp.path.front();
  seg.right = rp.path.back();
  seg.speed_lo = rp.lambdas.front();
  seg.speed_hi = rp.lambdas.back();
  seg.path = rp.path;
  seg.lambdas = rp.lambdas;
  return seg;
}

// Index just before the first sign change of the attachment defect along a
// rarefaction path; nullopt when the defect never changes sign.
std::optional<size_t> find_double_contact_bracket(
    const RarefactionPath& rp,
    const std::function<double(const State&)>& defect) {
  double prev = kNaN;
  size_t prev_k = 0;
  const size_t stride = std::max<size_t>(1, rp.path.size() / 200);
  for (size_t k = 0; k < rp.path.size(); k += stride) {
    const double v = defect(rp.path[k]);
    if (std::isfinite(prev) && std::isfinite(v) && (prev < 0.0) != (v < 0.0))
      return prev_k;
    if (std::isfinite(v)) {
      prev = v;
      prev_k = k;
    }
  }
  return std::nullopt;
}

}  // namespace

namespace {

// Recursive 1-family wave-curve composition toward the maximum packing
// line. Returns the segment list from `cur` onward, or nullopt when no
// admissible continuation exists at this depth.
class WaveCurveBuilder {
 public:
  WaveCurveBuilder(const ModelParams& p, const State& vertex)
      : p_(p), vertex_(vertex) {}

  std::optional<std::vector<WaveSegment>> build(const State& cur, int depth) {
    if (depth > 4) return std::nullopt;
    if (total_concentration(cur) >= p_.phi_max - 1e-9) return {{}};

    Vec2 toward_max = family_direction(p_, cur, 1);
    if (toward_max.sum() < 0.0) toward_max = -toward_max;
    const double growth = grad_lambda(p_, cur, 1).dot(toward_max);
    if (std::abs(growth) <= 1e-9)
      note += "lambda growth tie at (" + std::to_string(cur[0]) + ", " +
              std::to_string(cur[1]) + "); ";

    if (growth > 0.0) return rarefaction_leg(cur, depth);
    return shock_leg(cur, depth);
  }

  std::string note;

 private:
  // A fan from `cur`: either it reaches the maximum line, or it halts at a
  // lambda-maximum inflection and continues by a doubly characteristic jump
  // from the double-contact state found along the fan.
  std::optional<std::vector<WaveSegment>> rarefaction_leg(const State& cur,
                                                          int depth) {
    RarefactionPath rp = rarefaction_integrate(p_, cur, 1, +1);
    if (rp.stop == RarefactionStop::max_line ||
        rp.stop == RarefactionStop::boundary) {
      rp.path.push_back(vertex_);
      rp.lambdas.push_back(0.0);
      return {{make_rarefaction_segment(1, rp)}};
    }
    if (rp.stop != RarefactionStop::inflection) {
      note += "rarefaction stopped unexpectedly (coincidence/stall); ";
      return std::nullopt;
    }

    auto defect = [&](const State& q) -> double {
      const auto att = attachment_defect(p_, q, 1);
      return att ? att->defect : kNaN;
    };
    const auto bracket_k = find_double_contact_bracket(rp, defect);
    if (!bracket_k) {
      note +=
          "fan halts at the inflection with no double-contact crossing "
          "along it (limit-shock region); ";
      return std::nullopt;
    }
    size_t k = *bracket_k;
    size_t k_hi = std::min(k + std::max<size_t>(1, rp.path.size() / 200),
                           rp.path.size() - 1);
    State a = rp.path[k], b = rp.path[k_hi];
    const double da = defect(a);
    for (int it = 0; it < 50 && (b - a).norm() > 1e-13; ++it) {
      const State mid = 0.5 * (a + b);
      const double gm = defect(mid);
      if (!std::isfinite(gm)) break;
      ((gm < 0.0) == (da < 0.0) ? a : b) = mid;
    }
    const State b_state = 0.5 * (a + b);
    const auto att = attachment_defect(p_, b_state, 1);
    if (!att) {
      note += "double-contact partner lost after refinement; ";
      return std::nullopt;
    }
    // both characteristic equalities must survive the refinement
    const double l1b = eigenvalues(p_, b_state).first;
    if (std::abs(att->sigma - l1b) > 1e-6) {
      note += "double-contact attachment defect did not close; ";
      return std::nullopt;
    }
    auto rest = build(att->partner, depth + 1);
    if (!rest) return std::nullopt;
    if (!rest->empty() && rest->front().speed_lo < att->sigma - 1e-9) {
      note += "double-contact continuation breaks speed ordering; ";
      return std::nullopt;
    }

    RarefactionPath cut;
    cut.path.assign(rp.path.begin(), rp.path.begin() + k + 1);
    cut.lambdas.assign(rp.lambdas.begin(), rp.lambdas.begin() + k + 1);
    cut.path.push_back(b_state);
    cut.lambdas.push_back(l1b);

    std::vector<WaveSegment> segs{make_rarefaction_segment(1, cut)};
    WaveSegment jump =
        make_shock_segment(b_state, att->partner, att->sigma,
                           classify_shock(p_, b_state, att->partner));
    jump.family = 1;
    jump.char_left = jump.char_right = true;
    segs.push_back(jump);
    segs.insert(segs.end(), rest->begin(), rest->end());
    return segs;
  }

  // Right-characteristic shocks from `cur`, slowest first (the entropy
  // pick); the first candidate whose continuation completes wins.
  std::optional<std::vector<WaveSegment>> shock_leg(const State& cur,
                                                    int depth) {
    auto cands = char_shock_candidates(p_, cur, 1, true);
    if (cands.empty()) {
      note += "no right-characteristic partner along the locus; ";
      return std::nullopt;
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const State& x, const State& y) {
                       return least_squares_sigma(p_, cur, x) <
                              least_squares_sigma(p_, cur, y);
                     });
    for (const State& m : cands) {
      const double sigma = least_squares_sigma(p_, cur, m);
      const ShockClass cls = classify_shock(p_, cur, m);
      if (cls.kind != ShockKind::lax1) continue;
      auto rest = build(m, depth + 1);
      if (!rest) continue;
      if (!rest->empty() && rest->front().speed_lo < sigma - 1e-9) continue;
      WaveSegment seg = make_shock_segment(cur, m, sigma, cls);
      seg.family = 1;
      seg.char_right = true;
      seg.char_left = cls.left_char_1;
      std::vector<WaveSegment> segs{seg};
      segs.insert(segs.end(), rest->begin(), rest->end());
      return segs;
    }
    note += "no admissible characteristic-shock continuation; ";
    return std::nullopt;
  }

  const ModelParams& p_;
  State vertex_;
};

}  // namespace

WaveCurveSolution solve_rp_to_max(const ModelParams& p, const State& s,
                                  const std::optional<State>& requested_max) {
  if (!in_phase_space(p, s))
    throw std::invalid_argument("left state outside phase space");

  WaveCurveSolution sol;
  sol.left_datum = s;
  const State vertex =
      std::abs(s[1]) <= 1e-12 ? State(1.0, 0.0) : State(0.0, 1.0);

  if (total_concentration(s) >= p.phi_max - 1e-9) {
    sol.right_datum = s;
    sol.note = "left datum already on the maximum packing line";
    return sol;
  }

  WaveCurveBuilder builder(p, vertex);
  auto segs = builder.build(s, 0);
  sol.note = builder.note;
  if (!segs) {
    sol.unresolved = true;
    sol.right_datum = s;
    return sol;
  }
  sol.segments = std::move(*segs);
  for (size_t k = 0; k + 1 < sol.segments.size(); ++k)
    sol.middle_states.push_back(sol.segments[k].right);
  sol.right_datum =
      sol.segments.empty() ? s : sol.segments.back().right;
  if (requested_max && (sol.right_datum - *requested_max).norm() > 1e-9)
    sol.note += "terminal vertex differs from requested max state; ";
  return sol;
}

std::vector<State> sample_profile(const WaveCurveSolution& solution,
                                  const std::vector<double>& xi) {
  std::vector<State> out;
  out.reserve(xi.size());
  for (double x : xi) {
    State state = solution.left_datum;
    for (const auto& seg : solution.segments) {
      if (x < seg.speed_lo) break;
      if (x <= seg.speed_hi && seg.kind == WaveKind::rarefaction) {
        // monotone lambda lookup with linear interpolation
        const auto& l = seg.lambdas;
        size_t k = 1;
        while (k < l.size() && l[k] < x) ++k;
        if (k >= l.size()) {
          state = seg.right;
        } else {
          const double denom = l[k] - l[k - 1];
          const double t = denom > 0.0 ? (x - l[k - 1]) / denom : 0.0;
          state = seg.path[k - 1] + t * (seg.path[k] - seg.path[k - 1]);
        }
        break;
      }
      state = seg.right;
    }
    out.push_back(state);
  }
  return out;
}

}  // namespace bised
