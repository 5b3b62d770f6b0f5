#include "qrate/lloyd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

namespace qrate {

namespace {

// Conditional means of |N(0,1)| over the cells cut by arbitrary ascending
// thresholds (l_0 = 0, l_K = inf): interior cells get
// (phi(a) - phi(b)) / (Q(a) - Q(b)), the tail cell phi(a) / Q(a).
std::vector<double> centroids_at(const std::vector<double>& thresholds) {
  const std::size_t K = thresholds.size() + 1;
  std::vector<double> levels(K);
  double a = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double b = thresholds[k];
    levels[k] = (phi(a) - phi(b)) / (q_func(a) - q_func(b));
    a = b;
  }
  levels[K - 1] = phi(a) / q_func(a);
  return levels;
}

}  // namespace

LloydResult lloyd_optimize(std::size_t half_levels, double tol, std::size_t max_iter) {
  if (half_levels == 0) throw std::invalid_argument("lloyd_optimize: half_levels must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("lloyd_optimize: tol must be positive");

  const double step =
      half_levels == 1 ? one_bit_mmse_step() : optimal_step(half_levels);
  QuantizerSpec spec = make_uniform(half_levels, step);
  spec.name = "lloyd";

  LloydResult out;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const std::vector<double> levels = centroids_at(spec.thresholds);
    std::vector<double> thresholds(spec.thresholds.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k)
      thresholds[k] = 0.5 * (levels[k] + levels[k + 1]);

    double delta = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k)
      delta = std::max(delta, std::fabs(levels[k] - spec.levels[k]));
    for (std::size_t k = 0; k < thresholds.size(); ++k)
      delta = std::max(delta, std::fabs(thresholds[k] - spec.thresholds[k]));

    spec.levels = levels;
    spec.thresholds = std::move(thresholds);
    out.iterations = it;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }

  out.spec = std::move(spec);
  out.mse = mse(out.spec);
  out.gamma = gamma_factor(out.spec);
  return out;
}

QuantizerSpec equispaced_optimal(double step, std::size_t half_levels) {
  if (half_levels == 0)
    throw std::invalid_argument("equispaced_optimal: half_levels must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("equispaced_optimal: step must be positive and finite");
  QuantizerSpec spec;
  spec.thresholds.resize(half_levels - 1);
  for (std::size_t k = 0; k + 1 < half_levels; ++k)
    spec.thresholds[k] = double(k + 1) * step;
  spec.levels = centroid_levels(step, half_levels);
  spec.name = "equispaced-centroid";
  return spec;
}

ProbeResult consistency_probe(const QuantizerSpec& spec, const std::vector<double>& scales,
                              Channel ch, ScaleMode mode) {
  require_valid(spec);
  if (scales.empty()) throw std::invalid_argument("consistency_probe: scales must be non-empty");

  ProbeResult out;
  out.points.reserve(scales.size());
  double best_gmi = -1.0;
  double best_mse = std::numeric_limits<double>::infinity();
  for (double s : scales) {
    QuantizerSpec sp = scaled(spec, s, mode);
    require_valid(sp);
    const RateReport r = gmi(sp, ch);
    ProbePoint p;
    p.scale = s;
    p.gmi_bits = r.gmi_bits;
    p.mse = mse(sp);
    p.gamma = r.gamma;
    if (p.gmi_bits > best_gmi) {
      best_gmi = p.gmi_bits;
      out.argmax_gmi_scale = s;
    }
    if (p.mse < best_mse) {
      best_mse = p.mse;
      out.argmin_mse_scale = s;
    }
    out.points.push_back(p);
  }
  return out;
}

}  // namespace qrate
