#include "bised/contour.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>

namespace bised {
namespace {

// Node values equal to zero are treated as positive so every crossing lands
// strictly inside an edge.
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

// Horizontal edges are keyed by their left node, vertical by their bottom
// node; the low bit tags the orientation.
inline std::int64_t edge_key(int i, int j, bool horizontal, int nx) {
  return (static_cast<std::int64_t>(j) * (nx + 1) + i) * 2 +
         (horizontal ? 0 : 1);
}

struct Crossing {
  State point;
  std::vector<std::int64_t> neighbors;
};

}  // namespace

std::vector<Polyline> trace_zero_contours(const ScalarField& f,
                                          const Window& window, int nx, int ny,
                                          int refine_iters) {
  const double dx = window.width() / nx;
  const double dy = window.height() / ny;
  auto node_x = [&](int i) { return window.x_lo + i * dx; };
  auto node_y = [&](int j) { return window.y_lo + j * dy; };

  std::vector<double> values(static_cast<size_t>(nx + 1) * (ny + 1));
  auto value = [&](int i, int j) -> double& {
    return values[static_cast<size_t>(j) * (nx + 1) + i];
  };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) value(i, j) = f(node_x(i), node_y(j));

  std::map<std::int64_t, Crossing> crossings;

  // Bisection pins the crossing along the sign-change edge.
  auto crossing_on_edge = [&](int i, int j, bool horizontal) -> std::int64_t {
    const std::int64_t key = edge_key(i, j, horizontal, nx);
    if (crossings.count(key)) return key;
    double xa = node_x(i), ya = node_y(j);
    double xb = horizontal ? node_x(i + 1) : xa;
    double yb = horizontal ? ya : node_y(j + 1);
    double fa = value(i, j);
    double fb = horizontal ? value(i + 1, j) : value(i, j + 1);
    for (int it = 0; it < refine_iters; ++it) {
      const double xm = 0.5 * (xa + xb), ym = 0.5 * (ya + yb);
      const double fm = f(xm, ym);
      if (!std::isfinite(fm)) break;
      if (sign_of(fm) == sign_of(fa)) {
        xa = xm;
        ya = ym;
        fa = fm;
      } else {
        xb = xm;
        yb = ym;
        fb = fm;
      }
    }
    const double t = (fa == fb) ? 0.5 : fa / (fa - fb);
    crossings[key] = {State(xa + t * (xb - xa), ya + t * (yb - ya)), {}};
    return key;
  };

  using EdgeRef = std::tuple<int, int, bool>;  // node i, node j, horizontal
  auto link = [&](const EdgeRef& a, const EdgeRef& b) {
    const std::int64_t ka =
        crossing_on_edge(std::get<0>(a), std::get<1>(a), std::get<2>(a));
    const std::int64_t kb =
        crossing_on_edge(std::get<0>(b), std::get<1>(b), std::get<2>(b));
    crossings[ka].neighbors.push_back(kb);
    crossings[kb].neighbors.push_back(ka);
  };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v00 = value(i, j), v10 = value(i + 1, j);
      const double v01 = value(i, j + 1), v11 = value(i + 1, j + 1);
      if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) ||
          !std::isfinite(v11))
        continue;
      const int code = (sign_of(v00) > 0 ? 1 : 0) | (sign_of(v10) > 0 ? 2 : 0) |
                       (sign_of(v11) > 0 ? 4 : 0) | (sign_of(v01) > 0 ? 8 : 0);
      if (code == 0 || code == 15) continue;

      const EdgeRef bottom{i, j, true};
      const EdgeRef top{i, j + 1, true};
      const EdgeRef left{i, j, false};
      const EdgeRef right{i + 1, j, false};

      switch (code) {
        case 1:
        case 14:
          link(bottom, left);
          break;
        case 2:
        case 13:
          link(bottom, right);
          break;
        case 3:
        case 12:
          link(left, right);
          break;
        case 4:
        case 11:
          link(top, right);
          break;
        case 6:
        case 9:
          link(bottom, top);
          break;
        case 7:
        case 8:
          link(top, left);
          break;
        case 5:
        case 10: {
          // saddle: resolve with the cell-center sample
          const double fc = f(node_x(i) + 0.5 * dx, node_y(j) + 0.5 * dy);
          const bool center_pos = std::isfinite(fc) && sign_of(fc) > 0;
          if (center_pos == (sign_of(v00) > 0)) {
            link(bottom, right);
            link(top, left);
          } else {
            link(bottom, left);
            link(top, right);
          }
          break;
        }
        default:
          break;
      }
    }
  }

  // Stitch segments into chains: open chains first (degree-1 endpoints),
  // then any remaining loops.
  std::vector<Polyline> out;
  std::map<std::int64_t, bool> used;
  auto walk = [&](std::int64_t start) {
    Polyline line;
    std::int64_t prev = -1, cur = start;
    while (true) {
      used[cur] = true;
      line.push_back(crossings[cur].point);
      std::int64_t next = -1;
      for (std::int64_t nb : crossings[cur].neighbors) {
        if (nb != prev && !used[nb]) {
          next = nb;
          break;
        }
      }
      if (next < 0) {
        for (std::int64_t nb : crossings[cur].neighbors)
          if (nb == start && line.size() > 2)
            line.push_back(crossings[start].point);
        break;
      }
      prev = cur;
      cur = next;
    }
    return line;
  };

  for (auto& [key, c] : crossings)
    if (c.neighbors.size() == 1 && !used[key]) out.push_back(walk(key));
  for (auto& [key, c] : crossings)
    if (!used[key] && !c.neighbors.empty()) out.push_back(walk(key));
  return out;
}

}  // namespace bised
