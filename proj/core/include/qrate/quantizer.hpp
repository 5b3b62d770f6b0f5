#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qrate {

/// Symmetric magnitude quantizer with 2K output points. The positive half
/// line splits into cells [l_{k-1}, l_k) with l_0 = 0 and l_K = +inf;
/// cell k reproduces as +levels[k], the negative half mirrors by sign.
/// thresholds holds the K-1 interior edges l_1 < ... < l_{K-1}, levels
/// holds the K reproduction points. All quantities are on the normalized
/// input scale; any receive gain is absorbed into the thresholds by the
/// caller (see scaled()).
struct QuantizerSpec {
  std::vector<double> thresholds;
  std::vector<double> levels;
  std::string name;

  std::size_t half_levels() const { return levels.size(); }
  /// log2(2K), the per-component resolution in bits.
  double bits() const;
};

/// Mid-rise uniform rule: thresholds k*step, levels (k - 1/2)*step.
QuantizerSpec make_uniform(std::size_t half_levels, double step);

/// Conditional means of |N(0,1)| over the cells of an equispaced grid with
/// the given step: y_k = (phi((k-1)l) - phi(kl)) / (Q((k-1)l) - Q(kl)) for
/// the interior cells and y_K = phi((K-1)l) / Q((K-1)l) for the tail cell.
std::vector<double> centroid_levels(double step, std::size_t half_levels);

/// First structural violation, or nullopt if the spec is usable: sizes must
/// be K-1/K with K >= 1, thresholds strictly increasing and positive,
/// levels finite and strictly positive.
std::optional<std::string> validate(const QuantizerSpec& spec);

/// Throws std::invalid_argument carrying validate()'s message.
void require_valid(const QuantizerSpec& spec);

/// Quantize one normalized sample. v = 0 maps to +levels[0]; otherwise the
/// output is sign(v) * levels[k] for the half-open cell containing |v|.
double quantize(const QuantizerSpec& spec, double v);

enum class ScaleMode {
  /// Rescale the whole normalized rule (thresholds and levels), i.e. a pure
  /// gain change referred to the normalized domain.
  thresholds_and_levels,
  /// Rescale thresholds only, keeping the reproduction points fixed.
  thresholds_only,
};

/// Rule seen by a normalized input when the receive gain changes by 1/s.
QuantizerSpec scaled(const QuantizerSpec& spec, double s,
                     ScaleMode mode = ScaleMode::thresholds_and_levels);

}  // namespace qrate
