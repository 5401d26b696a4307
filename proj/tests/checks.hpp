#pragma once

// Shared helpers for the test suites: solution invariants, Halton sampling,
// small numeric utilities.

#include "bised/hugoniot.hpp"
#include "bised/riemann.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bised::testing {

// Wave-curve invariants every produced solution must satisfy: contiguous
// segments, non-decreasing speeds, monotone rarefaction eigenvalues, and
// shocks that re-classify to their recorded kind.
inline std::string check_solution(const ModelParams& p,
                                  const WaveCurveSolution& sol,
                                  double speed_tol = 1e-9) {
  for (size_t k = 0; k < sol.segments.size(); ++k) {
    const auto& seg = sol.segments[k];
    if (k > 0 && (sol.segments[k - 1].right - seg.left).norm() > 1e-12)
      return "segments " + std::to_string(k - 1) + "/" + std::to_string(k) +
             " not contiguous";
    if (k > 0 && seg.speed_lo < sol.segments[k - 1].speed_hi - speed_tol)
      return "speeds decrease at segment " + std::to_string(k);
    if (seg.speed_hi < seg.speed_lo - speed_tol)
      return "segment " + std::to_string(k) + " speed range inverted";
    if (seg.kind == WaveKind::rarefaction) {
      for (size_t j = 1; j < seg.lambdas.size(); ++j)
        if (seg.lambdas[j] < seg.lambdas[j - 1] - 1e-9)
          return "rarefaction eigenvalues not monotone in segment " +
                 std::to_string(k);
    } else {
      const auto cls = classify_shock(p, seg.left, seg.right);
      if (cls.kind != seg.shock_class.kind)
        return "shock re-classification mismatch in segment " +
               std::to_string(k);
    }
  }
  if (!sol.segments.empty()) {
    if ((sol.segments.front().left - sol.left_datum).norm() > 1e-12)
      return "first segment does not start at the left datum";
    if ((sol.segments.back().right - sol.right_datum).norm() > 1e-12)
      return "last segment does not end at the right datum";
  }
  return {};
}

inline double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

// Quasi-random interior states of the phase triangle with the given margin
// from all three boundaries.
inline std::vector<State> halton_interior(size_t count, double margin) {
  std::vector<State> out;
  unsigned index = 1;
  while (out.size() < count) {
    const State s(halton(index, 2), halton(index, 3));
    ++index;
    if (s[0] >= margin && s[1] >= margin &&
        s[0] + s[1] <= 1.0 - margin)
      out.push_back(s);
  }
  return out;
}

// Eigenvalues of a 2x2 matrix via the characteristic polynomial; the
// independent route used against the closed-form pair.
inline std::pair<double, double> char_poly_eigenvalues(const Mat2& m) {
  const double tr = m(0, 0) + m(1, 1);
  const double disc =
      (m(0, 0) - m(1, 1)) * (m(0, 0) - m(1, 1)) + 4.0 * m(0, 1) * m(1, 0);
  const double root = std::sqrt(std::max(disc, 0.0));
  return {0.5 * (tr - root), 0.5 * (tr + root)};
}

}  // namespace bised::testing
