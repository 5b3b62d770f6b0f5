#pragma once

// Fixed-point design of symmetric scalar quantizers for a unit-variance
// Gaussian source (Lloyd-Max), plus a scale-sweep probe that locates the
// gain minimizing distortion and the gain maximizing the achievable rate
// for an arbitrary quantizer shape.

#include <cstddef>
#include <vector>

#include "qrate/quantizer.hpp"
#include "qrate/rate.hpp"

namespace qrate {

struct LloydResult {
  QuantizerSpec spec;
  double mse = 0.0;    // E[(T - q(T))^2], T standard normal
  double gamma = 0.0;  // distortion factor of the converged design
  std::size_t iterations = 0;
  bool converged = false;
};

// Alternate centroid and midpoint updates until the largest parameter
// change falls below `tol` (or `max_iter` is hit). Starts from the
// distortion-optimal uniform design so the fixed point reached is the
// usual Lloyd-Max quantizer.
LloydResult lloyd_optimize(std::size_t half_levels, double tol = 1e-10,
                           std::size_t max_iter = 10000);

// Equispaced thresholds at multiples of `step` with conditional-mean
// levels. Improves on the purely uniform design at the same threshold
// spacing; its best step is slightly smaller than the uniform optimum.
QuantizerSpec equispaced_optimal(double step, std::size_t half_levels);

struct ProbePoint {
  double scale = 0.0;
  double gmi_bits = 0.0;
  double mse = 0.0;
  double gamma = 0.0;
};

struct ProbeResult {
  std::vector<ProbePoint> points;
  double argmax_gmi_scale = 0.0;
  double argmin_mse_scale = 0.0;
};

// Evaluate rate and distortion for the quantizer scaled by each entry of
// `scales` (see ScaleMode for what a gain multiplies). For designs whose
// levels are the conditional means of their cells the two argbests
// coincide; shapes violating that can pull them far apart.
ProbeResult consistency_probe(const QuantizerSpec& spec, const std::vector<double>& scales,
                              Channel ch, ScaleMode mode = ScaleMode::thresholds_and_levels);

}  // namespace qrate
