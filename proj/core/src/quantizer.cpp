#include "qrate/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrate/specfun.hpp"

namespace qrate {

double QuantizerSpec::bits() const {
  return std::log2(2.0 * static_cast<double>(levels.size()));
}

QuantizerSpec make_uniform(std::size_t half_levels, double step) {
  if (half_levels == 0) throw std::invalid_argument("make_uniform: half_levels must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("make_uniform: step must be positive and finite");
  QuantizerSpec spec;
  spec.thresholds.reserve(half_levels - 1);
  spec.levels.reserve(half_levels);
  for (std::size_t k = 1; k < half_levels; ++k) spec.thresholds.push_back(double(k) * step);
  for (std::size_t k = 0; k < half_levels; ++k) spec.levels.push_back((double(k) + 0.5) * step);
  return spec;
}

std::vector<double> centroid_levels(double step, std::size_t half_levels) {
  if (half_levels == 0) throw std::invalid_argument("centroid_levels: half_levels must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("centroid_levels: step must be positive and finite");
  std::vector<double> levels(half_levels);
  for (std::size_t k = 0; k + 1 < half_levels; ++k) {
    const double a = double(k) * step;
    const double b = double(k + 1) * step;
    levels[k] = (phi(a) - phi(b)) / (q_func(a) - q_func(b));
  }
  const double a = double(half_levels - 1) * step;
  levels[half_levels - 1] = phi(a) / q_func(a);
  return levels;
}

std::optional<std::string> validate(const QuantizerSpec& spec) {
  const std::size_t K = spec.levels.size();
  if (K == 0) return "degenerate quantizer: levels must hold at least one entry";
  if (spec.thresholds.size() != K - 1)
    return "thresholds must hold exactly one entry fewer than levels (got " +
           std::to_string(spec.thresholds.size()) + " for " + std::to_string(K) + " levels)";
  double prev = 0.0;
  for (std::size_t k = 0; k < spec.thresholds.size(); ++k) {
    const double t = spec.thresholds[k];
    if (!std::isfinite(t)) return "threshold " + std::to_string(k) + " is not finite";
    if (!(t > prev))
      return "thresholds must be strictly increasing and positive (violated at index " +
             std::to_string(k) + ")";
    prev = t;
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double y = spec.levels[k];
    if (!std::isfinite(y)) return "level " + std::to_string(k) + " is not finite";
    if (!(y > 0.0))
      return "degenerate quantizer: level " + std::to_string(k) + " must be strictly positive";
  }
  return std::nullopt;
}

void require_valid(const QuantizerSpec& spec) {
  if (auto err = validate(spec)) throw std::invalid_argument("invalid quantizer: " + *err);
}

double quantize(const QuantizerSpec& spec, double v) {
  const double mag = std::fabs(v);
  const auto it = std::upper_bound(spec.thresholds.begin(), spec.thresholds.end(), mag);
  const double y = spec.levels[std::size_t(it - spec.thresholds.begin())];
  return v < 0.0 ? -y : y;
}

QuantizerSpec scaled(const QuantizerSpec& spec, double s, ScaleMode mode) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::invalid_argument("scaled: scale must be positive and finite");
  QuantizerSpec out = spec;
  for (double& t : out.thresholds) t *= s;
  if (mode == ScaleMode::thresholds_and_levels)
    for (double& y : out.levels) y *= s;
  return out;
}

}  // namespace qrate
