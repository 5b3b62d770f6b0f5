#pragma once

#include <cstddef>

#include "qrate/rate.hpp"

namespace qrate {

/// Distortion factor of the overload mechanism alone (granular noise sent
/// to zero at fixed loading L > 0):
///   gamma_bar(L) = (ovl(L) - 4 Q(L)^2) / (1 - 4 int_L^inf t Q(t) dt)
/// where ovl is overload_infimum. Decreases from 1 - 2/pi (L -> 0) towards
/// 0 like 4 phi(L)/L^3.
double gamma_bar(double loading);

/// Leading-order overload rate loss, nats: 4 phi(L) L^{-3} * snr.
double overload_loss_approx_nats(double loading, Channel ch);

/// Leading-order granular rate loss, nats: step^2 snr / 12.
double granular_loss_approx_nats(double step, Channel ch);

/// Small-distortion surrogate for the uniform-design gamma at loading L:
///   mse_hat = 4 phi(L)/L^3 + 4 phi(L)^2/L^2 + L^2/(12 K^2).
double mse_hat(double loading, std::size_t half_levels);

/// Location of the sharp rate collapse when the loading overshoots,
/// in nats: L^2/2 + 3 ln L + ln(sqrt(2 pi)/4). Lower-bounds the true
/// saturation log(1/gamma_bar) for moderate L.
double waterfall_approx_nats(double loading);

/// Rate in the underloaded regime where granular noise dominates:
///   I = log(1+snr) - log(1 + L^2 snr / (12 K^2)), nats.
double underload_gmi_approx_nats(double loading, std::size_t half_levels, Channel ch);

/// Closed-form estimate of the optimal loading: the root of
///   L^2 + 6 ln L - ln(18/pi) = 4 ln(2K),
/// equivalently 24 K^2 phi(L) = L^3.
double lhat0(std::size_t half_levels);

/// The whole ladder of loading estimates with their absolute errors
/// against the exact optimum K * optimal_step(K). Requires K >= 2 (the
/// iterated-logarithm members need ln ln 2K > 0).
struct LoadingApprox {
  double exact = 0.0;  ///< L* = K * optimal_step(K)
  double l0 = 0.0;     ///< implicit closed form (lhat0)
  double l1 = 0.0;     ///< 2 sqrt(ln 2K)
  double l2 = 0.0;     ///< sqrt(4 ln 2K - 3 ln ln 2K - ln(32 pi / 9))
  double l3 = 0.0;     ///< l2 refined by the finite-K correction factor
  double l_linear = 0.0;  ///< (b + 4) / 3
  double err0 = 0.0, err1 = 0.0, err2 = 0.0, err3 = 0.0, err_linear = 0.0;
};
LoadingApprox lhat_family(std::size_t half_levels);

/// Closed-form rate estimate at the optimal uniform design:
///   I = log2(1+snr) - log2(1 + (4 b ln2 / (3 4^b)) snr).
/// The distortion coefficient equals ln(2K)/(3K^2) exactly.
double gmi_hat_bits(int bits, Channel ch);

/// Closed-form saturation estimate, bits: 2b - log2(b) + 0.11.
double sat_hat_bits(int bits);

/// Rules of thumb for the quantization snr ceiling 1/mmse, in dB.
struct PerBitRules {
  double snr_q_db_rule6 = 0.0;  ///< 6.02 b - 10 log10(b) + 0.34
  double snr_q_db_rule5 = 0.0;  ///< 5 b
};
PerBitRules per_bit_rules(int bits);

/// Resolution suggested by the linear rule b = 2 log10(snr) + b0.
double required_bits(double snr_db, double b0);

}  // namespace qrate
