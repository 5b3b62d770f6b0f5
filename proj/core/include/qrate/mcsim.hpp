#pragma once

// Monte Carlo reference for the quantized-output channel: draws the complex
// AWGN channel directly, pushes samples through the symmetric per-component
// quantizer, and estimates the rate-relevant moments with batch-means error
// bars. Runs are reproducible bit-for-bit for a given (seed, samples,
// batches) regardless of thread count: every batch owns a counter-based
// random stream and batches are reduced in index order.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

#include "qrate/quantizer.hpp"
#include "qrate/rate.hpp"

namespace qrate::mc {

/// One keyed block of the Philox 4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

struct McConfig {
  std::uint64_t samples = 1000000;  ///< total complex channel uses
  std::uint64_t seed = 0;
  std::size_t batches = 100;  ///< must divide samples
  /// 0 reads QRATE_THREADS from the environment, falling back to the
  /// hardware concurrency. Thread count never changes the estimates.
  unsigned max_threads = 0;
};

struct FieldEstimate {
  double value = 0.0;
  double std_error = 0.0;  ///< batch-means standard error of `value`
};

/// Point estimates from one run. cross is E[X conj(Yq)]; delta is the
/// squared complex correlation |E[X conj(Yq)]|^2 / (E[|X|^2] E[|Yq|^2]);
/// gmi_bits = -log2(1 - delta); gamma inverts the rate relation at the
/// configured snr, ((1+snr)(1-delta) - 1)/snr; mse is the per-component
/// distortion of the normalized quantizer input.
struct McEstimate {
  FieldEstimate cross_re;
  FieldEstimate cross_im;
  FieldEstimate out_power;
  FieldEstimate delta;
  FieldEstimate gmi_bits;
  FieldEstimate gamma;
  FieldEstimate mse;
  std::uint64_t samples = 0;
  std::size_t batches = 0;
  unsigned threads_used = 0;
};

/// Simulate Y = h X + Z with X ~ CN(0,2), receive snr ch.snr (so the noise
/// power is E[|Z|^2] = 2 |h|^2 / snr), normalize each output component to
/// unit variance and quantize it with `spec`. |h| only exercises the
/// normalization; arg(h) rotates cross and leaves every magnitude alone.
McEstimate simulate(const QuantizerSpec& spec, Channel ch, McConfig cfg,
                    std::complex<double> h = {1.0, 0.0});

/// Second-order diagnostics of the decomposition V = Yq + W, W = V - Yq,
/// where V is the normalized channel output and Yq its quantized image.
/// rho_* are magnitudes of complex correlation coefficients; the chain rule
/// rho_xy == rho_xv * rho_vy holds exactly in expectation. y_w_cross is
/// E[Yq conj(W)], zero precisely when the levels are cell conditional
/// means; pythagoras compares E[|V|^2] against E[|Yq|^2] + E[|W|^2], which
/// split only under that same orthogonality.
struct CorrelationProbe {
  double rho_xv = 0.0;
  double rho_vy = 0.0;
  double rho_xy = 0.0;
  double y_w_cross_re = 0.0;
  double y_w_cross_im = 0.0;
  double pythagoras_lhs = 0.0;
  double pythagoras_rhs = 0.0;
};

CorrelationProbe correlation_probe(const QuantizerSpec& spec, Channel ch, McConfig cfg,
                                   std::complex<double> h = {1.0, 0.0});

struct BatterySpecimen {
  std::string name;
  QuantizerSpec spec;
};

/// Fixed roster of designs the analytic formulas are cross-validated
/// against: the one-bit rule, optimal uniform rules at 2-4 bits, a
/// deliberately over-wide uniform rule, the Lloyd-Max rule at K = 4, and
/// two hand-picked non-centroid shapes (one with monotone levels, one
/// without) that exercise the generic sums far from any optimum.
std::vector<BatterySpecimen> validation_battery();

}  // namespace qrate::mc
