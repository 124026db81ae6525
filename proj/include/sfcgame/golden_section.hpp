#pragma once

#include <cmath>
#include <concepts>
#include <utility>

namespace sfcgame {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than `tol`. On a flat stretch the
/// bracket moves right, so a function that is constant and then decreasing
/// is handled. The endpoints are compared too, so a minimum sitting on a
/// bound is returned exactly.
template <std::invocable<double> F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol = 1e-6,
                                      int max_iterations = 200) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > tol && it < max_iterations) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }

  ScalarMinimum best{0.5 * (a + b), 0.0, it};
  best.value = f(best.x);
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v < best.value) best = {x, v, it};
  }
  return best;
}

}  // namespace sfcgame
