#include "qrate/specfun.hpp"

#include <cmath>

namespace qrate {

double phi(double t) { return std::exp(-0.5 * t * t) / kSqrt2Pi; }

double q_func(double u) { return 0.5 * std::erfc(u * 0.7071067811865475244); }

double tail_tq(double loading) {
  const double q = q_func(loading);
  const double p = phi(loading);
  return 0.5 * ((1.0 - loading * loading) * q + loading * p);
}

double overload_infimum(double loading) {
  const double q = q_func(loading);
  const double p = phi(loading);
  return 2.0 * ((1.0 + loading * loading) * q - loading * p);
}

namespace xp {

long double phi(long double t) {
  constexpr long double sqrt_2pi = 2.506628274631000502415765284811045253L;
  return std::exp(-0.5L * t * t) / sqrt_2pi;
}

long double q_func(long double u) {
  constexpr long double inv_sqrt2 = 0.707106781186547524400844362104849039L;
  return 0.5L * std::erfc(u * inv_sqrt2);
}

}  // namespace xp

}  // namespace qrate
