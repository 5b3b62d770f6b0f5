#include "qrate/uniform_opt.hpp"

#include <cmath>
#include <stdexcept>

#include "qrate/asymptotics.hpp"
#include "qrate/optim.hpp"
#include "qrate/specfun.hpp"

namespace qrate {

double one_bit_mmse_step() { return 4.0 / kSqrt2Pi; }

double optimal_step(std::size_t half_levels) {
  if (half_levels == 0) throw std::invalid_argument("optimal_step: half_levels must be >= 1");
  if (half_levels == 1) return one_bit_mmse_step();
  const auto h = [half_levels](double step) {
    return coeff_a_uniform(half_levels, step) -
           kSqrt2OverPi * coeff_b_uniform(half_levels, step);
  };
  // h > 0 left of the optimum, < 0 right of it; the closed-form loading
  // estimate lands within a few percent, so a factor-2 bracket almost
  // always straddles already.
  const double guess = lhat0(half_levels) / double(half_levels);
  double lo = 0.5 * guess, hi = 2.0 * guess;
  for (int i = 0; i < 60 && h(lo) <= 0.0; ++i) lo *= 0.5;
  for (int i = 0; i < 60 && h(hi) >= 0.0; ++i) hi *= 2.0;
  return find_root(h, lo, hi, 1e-12);
}

double mmse_uniform(std::size_t half_levels) {
  return gamma_factor_uniform(half_levels, optimal_step(half_levels));
}

UniformDesignRow table_row(int bits) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("table_row: bits must be in 1..16");
  const std::size_t K = std::size_t(1) << (bits - 1);
  UniformDesignRow row;
  row.bits = bits;
  row.half_levels = K;
  row.step = optimal_step(K);
  row.loading = double(K) * row.step;
  row.mmse = gamma_factor_uniform(K, row.step);
  row.mmse_approx = std::log(2.0 * double(K)) / (3.0 * double(K) * double(K));
  row.snr_q_db = -10.0 * std::log10(row.mmse);
  row.saturation_bits = -std::log2(row.mmse);
  row.sat_approx_bits = sat_hat_bits(bits);
  return row;
}

RateReport max_gmi(int bits, Channel ch) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("max_gmi: bits must be in 1..16");
  const std::size_t K = std::size_t(1) << (bits - 1);
  return gmi_uniform(K, optimal_step(K), ch);
}

}  // namespace qrate
