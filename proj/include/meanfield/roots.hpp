#pragma once

#include <cmath>

#include "meanfield/errors.hpp"

namespace meanfield::roots {

/// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of
/// opposite sign (either may be zero).  Converges unconditionally.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-13, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw domain_error("bisect: interval does not bracket a root");
  }
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Newton iteration safeguarded by a maintained bracket; any step leaving the
/// bracket falls back to bisection of it.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double x_tol = 1e-14,
                     int max_iter = 120) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw domain_error("newton_bisect: interval does not bracket a root");
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= x_tol) break;
    const double d = df(x);
    double next = (d != 0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace meanfield::roots
