#include "qrate/rate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrate/specfun.hpp"

namespace qrate {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458176568;

void require_channel(Channel ch) {
  if (!(ch.snr > 0.0) || !std::isfinite(ch.snr))
    throw std::invalid_argument("channel snr must be positive and finite");
}

}  // namespace

Channel Channel::from_db(double snr_db) { return Channel{std::pow(10.0, snr_db / 10.0)}; }

double Channel::snr_db() const { return 10.0 * std::log10(snr); }

double coeff_a(const QuantizerSpec& spec) {
  require_valid(spec);
  const std::size_t K = spec.levels.size();
  double sum = 0.0;
  double phi_lo = phi(0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double phi_hi = (k + 1 < K) ? phi(spec.thresholds[k]) : 0.0;
    sum += spec.levels[k] * (phi_lo - phi_hi);
    phi_lo = phi_hi;
  }
  return kSqrt2Pi * sum;
}

double coeff_b(const QuantizerSpec& spec) {
  require_valid(spec);
  const std::size_t K = spec.levels.size();
  double sum = 0.0;
  double q_lo = 0.5;
  for (std::size_t k = 0; k < K; ++k) {
    const double q_hi = (k + 1 < K) ? q_func(spec.thresholds[k]) : 0.0;
    sum += spec.levels[k] * spec.levels[k] * (q_lo - q_hi);
    q_lo = q_hi;
  }
  return kPi * sum;
}

double coeff_a_uniform(std::size_t half_levels, double step) {
  if (half_levels == 0) throw std::invalid_argument("half_levels must be >= 1");
  double sum = 0.0;
  for (std::size_t k = half_levels; k-- > 0;) {
    const double t = double(k) * step;
    sum += std::exp(-0.5 * t * t);
  }
  return step * sum - 0.5 * step;
}

double coeff_b_uniform(std::size_t half_levels, double step) {
  if (half_levels == 0) throw std::invalid_argument("half_levels must be >= 1");
  double sum = 0.0;
  for (std::size_t k = half_levels; k-- > 1;) sum += 2.0 * double(k) * q_func(double(k) * step);
  return kPi * step * step * (sum + 0.125);
}

double gamma_factor(const QuantizerSpec& spec) {
  const double a = coeff_a(spec);
  const double b = coeff_b(spec);
  return 1.0 - a * a / b;
}

double gamma_factor_uniform(std::size_t half_levels, double step) {
  const double a = coeff_a_uniform(half_levels, step);
  const double b = coeff_b_uniform(half_levels, step);
  return 1.0 - a * a / b;
}

double gamma_compensated(const QuantizerSpec& spec) {
  require_valid(spec);
  const std::size_t K = spec.levels.size();
  long double a = 0.0L, b = 0.0L;
  long double phi_lo = xp::phi(0.0L);
  long double q_lo = 0.5L;
  for (std::size_t k = 0; k < K; ++k) {
    const bool last = (k + 1 == K);
    const long double t = last ? 0.0L : (long double)spec.thresholds[k];
    const long double phi_hi = last ? 0.0L : xp::phi(t);
    const long double q_hi = last ? 0.0L : xp::q_func(t);
    const long double y = spec.levels[k];
    a += y * (phi_lo - phi_hi);
    b += y * y * (q_lo - q_hi);
    phi_lo = phi_hi;
    q_lo = q_hi;
  }
  constexpr long double sqrt_2pi = 2.506628274631000502415765284811045253L;
  constexpr long double pi_l = 3.141592653589793238462643383279502884L;
  const long double A = sqrt_2pi * a;
  const long double B = pi_l * b;
  return double((B - A * A) / B);
}

double gamma_compensated_uniform(std::size_t half_levels, double step) {
  const long double A = xp::coeff_a_uniform(half_levels, step);
  const long double B = xp::coeff_b_uniform(half_levels, step);
  return double((B - A * A) / B);
}

namespace {

RateReport report_from_gamma(double a, double b, double g, Channel ch) {
  require_channel(ch);
  RateReport r;
  r.coeff_a = a;
  r.coeff_b = b;
  r.gamma = g;
  const double cap_nats = std::log1p(ch.snr);
  const double loss_nats = std::log1p(g * ch.snr);
  r.gmi_nats = cap_nats - loss_nats;
  r.gmi_bits = r.gmi_nats / kLn2;
  r.capacity_bits = cap_nats / kLn2;
  r.rate_loss_bits = loss_nats / kLn2;
  r.effective_snr = (1.0 - g) * ch.snr / (g * ch.snr + 1.0);
  r.saturation_bits = -std::log2(g);
  return r;
}

}  // namespace

RateReport gmi(const QuantizerSpec& spec, Channel ch) {
  const double a = coeff_a(spec);
  const double b = coeff_b(spec);
  return report_from_gamma(a, b, 1.0 - a * a / b, ch);
}

RateReport gmi_uniform(std::size_t half_levels, double step, Channel ch) {
  const double a = coeff_a_uniform(half_levels, step);
  const double b = coeff_b_uniform(half_levels, step);
  return report_from_gamma(a, b, 1.0 - a * a / b, ch);
}

double mse(const QuantizerSpec& spec) {
  const double a = coeff_a(spec);
  const double b = coeff_b(spec);
  return 1.0 - (2.0 / kPi) * (kSqrt2Pi * a - b);
}

double mse_uniform(std::size_t half_levels, double step) {
  const double a = coeff_a_uniform(half_levels, step);
  const double b = coeff_b_uniform(half_levels, step);
  return 1.0 - (2.0 / kPi) * (kSqrt2Pi * a - b);
}

namespace {

// int_a^b (t - c)^2 phi(t) dt; pass b = +inf for the tail cell.
double cell_second_moment(double a, double b, double c) {
  const double qa = q_func(a);
  const double pa = phi(a);
  double val = (1.0 + c * c) * qa + (a - 2.0 * c) * pa;
  if (std::isfinite(b)) val -= (1.0 + c * c) * q_func(b) + (b - 2.0 * c) * phi(b);
  return val;
}

}  // namespace

MseBreakdown mse_breakdown(std::size_t half_levels, double step) {
  if (half_levels == 0) throw std::invalid_argument("half_levels must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("step must be positive and finite");
  const double K = double(half_levels);
  const double L = K * step;
  MseBreakdown out;
  double granular = 0.0;
  for (std::size_t k = 1; k <= half_levels; ++k) {
    const double y = (double(k) - 0.5) * step;
    granular += cell_second_moment((double(k) - 1.0) * step, double(k) * step, y);
  }
  out.granular = 2.0 * granular;
  out.overload = 2.0 * cell_second_moment(L, std::numeric_limits<double>::infinity(), L - 0.5 * step);
  out.total = out.granular + out.overload;
  return out;
}

double rate_loss_bits(const QuantizerSpec& spec, Channel ch) {
  require_channel(ch);
  return std::log1p(gamma_factor(spec) * ch.snr) / kLn2;
}

double aqnm_rate_estimate_bits(const QuantizerSpec& spec, Channel ch) {
  require_channel(ch);
  const double m = mse(spec);
  return (std::log1p(ch.snr) - std::log1p(m / (1.0 + m) * ch.snr)) / kLn2;
}

namespace xp {

long double coeff_a_uniform(std::size_t half_levels, long double step) {
  long double sum = 0.0L;
  for (std::size_t k = half_levels; k-- > 0;) {
    const long double t = (long double)(k)*step;
    sum += std::exp(-0.5L * t * t);
  }
  return step * sum - 0.5L * step;
}

long double coeff_b_uniform(std::size_t half_levels, long double step) {
  constexpr long double pi_l = 3.141592653589793238462643383279502884L;
  long double sum = 0.0L;
  for (std::size_t k = half_levels; k-- > 1;) sum += 2.0L * (long double)(k)*q_func((long double)(k)*step);
  return pi_l * step * step * (sum + 0.125L);
}

long double gamma_uniform(std::size_t half_levels, long double step) {
  const long double a = coeff_a_uniform(half_levels, step);
  const long double b = coeff_b_uniform(half_levels, step);
  return 1.0L - a * a / b;
}

long double mse_uniform(std::size_t half_levels, long double step) {
  constexpr long double pi_l = 3.141592653589793238462643383279502884L;
  constexpr long double sqrt_2pi = 2.506628274631000502415765284811045253L;
  const long double a = coeff_a_uniform(half_levels, step);
  const long double b = coeff_b_uniform(half_levels, step);
  return 1.0L - (2.0L / pi_l) * (sqrt_2pi * a - b);
}

long double gmi_nats_uniform(std::size_t half_levels, long double step, long double snr) {
  return std::log1p(snr) - std::log1p(gamma_uniform(half_levels, step) * snr);
}

}  // namespace xp

}  // namespace qrate
