#pragma once

// Marching-squares zero-contour tracing for scalar fields on a rectangle.
// Fields may return NaN to mask regions; cells touching masked nodes are
// skipped.

#include "bised/model.hpp"

#include <functional>
#include <vector>

namespace bised {

using Polyline = std::vector<State>;

struct Window {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;

  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  bool contains(const State& s) const {
    return s[0] >= x_lo && s[0] <= x_hi && s[1] >= y_lo && s[1] <= y_hi;
  }
};

using ScalarField = std::function<double(double, double)>;

/// Traces the zero level set of f over an nx x ny cell grid. Each edge
/// crossing is refined by bisection on f along the edge; segments are
/// stitched into polylines (closed loops repeat their first point).
std::vector<Polyline> trace_zero_contours(const ScalarField& f,
                                          const Window& window, int nx, int ny,
                                          int refine_iters = 40);

}  // namespace bised
