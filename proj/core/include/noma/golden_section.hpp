#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace noma {

struct ScalarMaximum {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi], assumed unimodal on
/// that bracket. Stops when the bracket is narrower than tol.
inline ScalarMaximum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                             double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, f(mid)};
}

/// Grid bracketing then golden-section refinement on (lo, hi]. The grid
/// holds `grid_points` values lo + (hi - lo) * i / grid_points for
/// i = 1..grid_points; the refinement runs on the neighbours of the best
/// grid point, and the best of grid and refinement is returned.
inline ScalarMaximum bracketed_maximize(const std::function<double(double)>& f, double lo, double hi,
                                        std::size_t grid_points, double tol) {
  std::vector<double> xs(grid_points);
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(grid_points);
    const double v = f(xs[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double left = best == 0 ? lo : xs[best - 1];
  const double right = best + 1 == grid_points ? hi : xs[best + 1];
  ScalarMaximum refined = golden_section_maximize(f, left, right, tol);
  if (refined.value >= best_value) return refined;
  return {xs[best], best_value};
}

}  // namespace noma
