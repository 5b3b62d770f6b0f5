#pragma once

namespace qrate {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;
// sqrt(2/pi), the level-to-coefficient ratio at an MSE-optimal design
inline constexpr double kSqrt2OverPi = 0.797884560802865355879892119868763737;

/// Standard normal density. phi(+-inf) == 0.
double phi(double t);

/// Gaussian tail probability Q(u) = P(N(0,1) > u), evaluated via erfc so the
/// relative error stays at a few ulp across the representable range.
/// q_func(-inf) == 1, q_func(+inf) == 0.
double q_func(double u);

/// Closed form of int_L^inf t Q(t) dt = ((1 - L^2) Q(L) + L phi(L)) / 2.
double tail_tq(double loading);

/// Infimum of the overload distortion over all finite-resolution symmetric
/// designs with loading L (both tails):
///   2 int_L^inf (t - L)^2 phi(t) dt = 2 ((1 + L^2) Q(L) - L phi(L)).
/// Strictly below 4 phi(L) / L^3 for every L > 0.
double overload_infimum(double loading);

// Extended-precision variants. Used by the compensated gamma path and by
// test-side cross checks whose noise floor must sit below double rounding.
namespace xp {
long double phi(long double t);
long double q_func(long double u);
}  // namespace xp

}  // namespace qrate
