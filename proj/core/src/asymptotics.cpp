#include "qrate/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "qrate/optim.hpp"
#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

namespace qrate {

namespace {
constexpr double kLn2 = 0.693147180559945309417232121458176568;

void require_loading(double loading) {
  if (!(loading > 0.0) || !std::isfinite(loading))
    throw std::invalid_argument("loading must be positive and finite");
}
}  // namespace

double gamma_bar(double loading) {
  require_loading(loading);
  const double q = q_func(loading);
  const double num = overload_infimum(loading) - 4.0 * q * q;
  const double den = 1.0 - 4.0 * tail_tq(loading);
  return num / den;
}

double overload_loss_approx_nats(double loading, Channel ch) {
  require_loading(loading);
  return 4.0 * phi(loading) / (loading * loading * loading) * ch.snr;
}

double granular_loss_approx_nats(double step, Channel ch) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("step must be positive and finite");
  return step * step * ch.snr / 12.0;
}

double mse_hat(double loading, std::size_t half_levels) {
  require_loading(loading);
  if (half_levels == 0) throw std::invalid_argument("half_levels must be >= 1");
  const double p = phi(loading);
  const double K = double(half_levels);
  return 4.0 * p / (loading * loading * loading) + 4.0 * p * p / (loading * loading) +
         loading * loading / (12.0 * K * K);
}

double waterfall_approx_nats(double loading) {
  require_loading(loading);
  return 0.5 * loading * loading + 3.0 * std::log(loading) + std::log(kSqrt2Pi / 4.0);
}

double underload_gmi_approx_nats(double loading, std::size_t half_levels, Channel ch) {
  require_loading(loading);
  if (half_levels == 0) throw std::invalid_argument("half_levels must be >= 1");
  const double K = double(half_levels);
  return std::log1p(ch.snr) - std::log1p(loading * loading * ch.snr / (12.0 * K * K));
}

double lhat0(std::size_t half_levels) {
  if (half_levels == 0) throw std::invalid_argument("lhat0: half_levels must be >= 1");
  const double c = std::log(18.0 / kPi) + 4.0 * std::log(2.0 * double(half_levels));
  // f is increasing and convex past sqrt(3); Newton from 2 sqrt(ln 2K)
  // (always an overshoot) converges monotonically, with a bisection
  // fallback for safety.
  double x = 2.0 * std::sqrt(std::log(2.0 * double(half_levels)));
  for (int i = 0; i < 100; ++i) {
    const double f = x * x + 6.0 * std::log(x) - c;
    const double fp = 2.0 * x + 6.0 / x;
    const double step = f / fp;
    x -= step;
    if (std::fabs(step) < 1e-14 * x) return x;
  }
  return find_root([c](double l) { return l * l + 6.0 * std::log(l) - c; }, 0.1, 20.0, 1e-14);
}

LoadingApprox lhat_family(std::size_t half_levels) {
  if (half_levels < 2)
    throw std::invalid_argument("lhat_family: needs half_levels >= 2 (ln ln 2K must be positive)");
  LoadingApprox out;
  const double K = double(half_levels);
  const double ln2k = std::log(2.0 * K);
  const double b = std::log2(2.0 * K);
  out.exact = K * optimal_step(half_levels);
  out.l0 = lhat0(half_levels);
  out.l1 = 2.0 * std::sqrt(ln2k);
  out.l2 = std::sqrt(4.0 * ln2k - 3.0 * std::log(ln2k) - std::log(32.0 * kPi / 9.0));
  const double corr = (1.0 + 4.0 * ln2k / (2.0 * K)) * (1.0 - 3.0 / (4.0 * ln2k)) *
                      std::pow(1.0 + (1.0 / (2.0 * ln2k)) *
                                         (1.5 * std::log(ln2k) + std::log(4.0 * kSqrt2Pi / 3.0)),
                               1.5);
  out.l3 = std::sqrt(out.l2 * out.l2 + 2.0 * std::log(corr));
  out.l_linear = (b + 4.0) / 3.0;
  out.err0 = std::fabs(out.l0 - out.exact);
  out.err1 = std::fabs(out.l1 - out.exact);
  out.err2 = std::fabs(out.l2 - out.exact);
  out.err3 = std::fabs(out.l3 - out.exact);
  out.err_linear = std::fabs(out.l_linear - out.exact);
  return out;
}

double gmi_hat_bits(int bits, Channel ch) {
  if (bits < 1) throw std::invalid_argument("gmi_hat_bits: bits must be >= 1");
  const double fourb = std::pow(4.0, double(bits));
  const double coeff = 4.0 * double(bits) * kLn2 / (3.0 * fourb);
  return (std::log1p(ch.snr) - std::log1p(coeff * ch.snr)) / kLn2;
}

double sat_hat_bits(int bits) {
  if (bits < 1) throw std::invalid_argument("sat_hat_bits: bits must be >= 1");
  return 2.0 * double(bits) - std::log2(double(bits)) + 0.11;
}

PerBitRules per_bit_rules(int bits) {
  if (bits < 1) throw std::invalid_argument("per_bit_rules: bits must be >= 1");
  return PerBitRules{6.02 * double(bits) - 10.0 * std::log10(double(bits)) + 0.34,
                     5.0 * double(bits)};
}

double required_bits(double snr_db, double b0) {
  if (b0 < 0.0) throw std::invalid_argument("required_bits: b0 must be >= 0");
  return 2.0 * snr_db / 10.0 + b0;
}

}  // namespace qrate
