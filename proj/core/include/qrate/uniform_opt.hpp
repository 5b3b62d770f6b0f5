#pragma once

#include <cstddef>

#include "qrate/rate.hpp"

namespace qrate {

/// One row of the optimal uniform design table.
struct UniformDesignRow {
  int bits = 0;
  std::size_t half_levels = 0;
  double loading = 0.0;            ///< L* = K * step
  double step = 0.0;               ///< l*
  double mmse = 0.0;               ///< gamma at the optimum (== mse there)
  double mmse_approx = 0.0;        ///< ln(2K) / (3 K^2)
  double snr_q_db = 0.0;           ///< -10 log10(mmse)
  double saturation_bits = 0.0;    ///< log2(1/mmse)
  double sat_approx_bits = 0.0;    ///< 2b - log2(b) + 0.11
};

/// Step minimizing the one-bit mse: 4/sqrt(2 pi). The one-bit gamma does
/// not depend on the step at all, so this only matters for mse.
double one_bit_mmse_step();

/// Unique MSE-optimal (equivalently GMI-optimal, at any snr) mid-rise step
/// for K half levels: the root of A(l) - sqrt(2/pi) B(l). The bracket is
/// seeded from the closed-form loading estimate and expanded until it
/// straddles the sign change.
double optimal_step(std::size_t half_levels);

/// gamma of the optimal uniform design (the per-component distortion floor
/// of the uniform family at this resolution).
double mmse_uniform(std::size_t half_levels);

/// Full design row for a per-component resolution of `bits` (K = 2^{b-1}).
UniformDesignRow table_row(int bits);

/// Rate report of the optimal uniform design at this resolution and snr.
RateReport max_gmi(int bits, Channel ch);

}  // namespace qrate
