#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qrate {

/// Bracketed scalar root finder: bisection safeguarded with inverse
/// quadratic interpolation (Brent style). f(a) and f(b) must differ in
/// sign. Stops once the bracket is below tol (plus a few ulp of |x|).
template <class F, class T = double>
T find_root(F&& f, T a, T b, T tol = T(1e-12), int max_iter = 200) {
  T fa = f(a), fb = f(b);
  if (fa == T(0)) return a;
  if (fb == T(0)) return b;
  if ((fa > T(0)) == (fb > T(0)))
    throw std::invalid_argument("find_root: endpoints do not bracket a sign change");
  T c = a, fc = fa;  // previous iterate
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const T eps = T(4) * std::numeric_limits<T>::epsilon() * std::fabs(b) + tol;
    const T mid = (c - b) / T(2);
    if (std::fabs(mid) <= eps || fb == T(0)) return b;
    T step;
    if (std::fabs(fa) > std::fabs(fb) && fa != fb && fc != fb && fa != fc) {
      // inverse quadratic through (a,fa), (b,fb), (c,fc)
      const T r = fb / fc, s = fb / fa, t = fa / fc;
      const T p = s * (t * (r - t) * (c - b) - (T(1) - r) * (b - a));
      const T q = (t - T(1)) * (r - T(1)) * (s - T(1));
      step = (q != T(0)) ? p / q : mid;
      if (!(std::fabs(step) < std::fabs(mid)) || !std::isfinite(step)) step = mid;
    } else {
      step = mid;
    }
    a = b; fa = fb;
    b += (std::fabs(step) > eps) ? step : (mid > T(0) ? eps : -eps);
    fb = f(b);
    if ((fb > T(0)) == (fc > T(0))) { c = a; fc = fa; }
  }
  return b;
}

/// Golden-section minimizer on [a, b]; f must be unimodal there. Returns
/// the midpoint of the final bracket once its width is below tol.
template <class F, class T = double>
T golden_min(F&& f, T a, T b, T tol = T(1e-9), int max_iter = 400) {
  constexpr double inv_phi_d = 0.6180339887498948482;
  const T r = T(inv_phi_d);
  T x1 = b - r * (b - a);
  T x2 = a + r * (b - a);
  T f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / T(2);
}

}  // namespace qrate
