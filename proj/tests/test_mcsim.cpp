#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qrate/lloyd.hpp"
#include "qrate/mcsim.hpp"
#include "qrate/rate.hpp"
#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

using namespace qrate;

namespace {

struct Analytic {
  double cross_mag, out_power, delta, gmi_bits, gamma, mse;
};

// closed-form targets of every simulated moment, from the A/B coefficients
Analytic analytic_targets(const QuantizerSpec& spec, Channel ch) {
  const double a = coeff_a(spec);
  const double b = coeff_b(spec);
  Analytic t;
  t.cross_mag = 4.0 * a / std::sqrt(2.0 * kPi * (1.0 + 1.0 / ch.snr));
  t.out_power = 4.0 * b / kPi;
  t.delta = ch.snr / (1.0 + ch.snr) * a * a / b;
  t.gmi_bits = -std::log2(1.0 - t.delta);
  t.gamma = gamma_factor(spec);
  t.mse = mse(spec);
  return t;
}

void check_within_error_bars(const mc::McEstimate& est, const Analytic& t) {
  // A degenerate statistic (e.g. |Yq|^2 of a one-bit rule is the same for
  // every sample) has an exactly-zero batch-means standard error, leaving
  // only floating-point accumulation noise; the additive floor covers that.
  const auto band = [](const mc::FieldEstimate& f, double scale) {
    return 4.0 * f.std_error + 1e-12 * (1.0 + std::fabs(scale));
  };
  CHECK(std::fabs(est.cross_re.value - t.cross_mag) <= band(est.cross_re, t.cross_mag));
  CHECK(std::fabs(est.cross_im.value) <= band(est.cross_im, 0.0));
  CHECK(std::fabs(est.out_power.value - t.out_power) <= band(est.out_power, t.out_power));
  CHECK(std::fabs(est.delta.value - t.delta) <= band(est.delta, t.delta));
  CHECK(std::fabs(est.gmi_bits.value - t.gmi_bits) <= band(est.gmi_bits, t.gmi_bits));
  CHECK(std::fabs(est.gamma.value - t.gamma) <= band(est.gamma, t.gamma));
  CHECK(std::fabs(est.mse.value - t.mse) <= band(est.mse, t.mse));
}

const QuantizerSpec& battery_spec(const std::vector<mc::BatterySpecimen>& battery,
                                  const std::string& name) {
  for (const auto& s : battery)
    if (s.name == name) return s.spec;
  throw std::runtime_error("battery specimen not found: " + name);
}

}  // namespace

TEST_CASE("counter-based generator matches the published test vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(mc::philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(mc::philox4x32(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                       A2{0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(mc::philox4x32(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       A2{0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("estimates are identical for any thread count") {
  const QuantizerSpec spec = make_uniform(4, optimal_step(4));
  const Channel ch = Channel::from_db(10.0);
  mc::McConfig cfg;
  cfg.samples = 100000;
  cfg.batches = 50;
  cfg.seed = 7;

  cfg.max_threads = 1;
  const mc::McEstimate a = mc::simulate(spec, ch, cfg);
  cfg.max_threads = 4;
  const mc::McEstimate b = mc::simulate(spec, ch, cfg);

  CHECK(a.threads_used == 1);
  CHECK(b.threads_used == 4);
  CHECK(a.gmi_bits.value == b.gmi_bits.value);
  CHECK(a.gmi_bits.std_error == b.gmi_bits.std_error);
  CHECK(a.cross_re.value == b.cross_re.value);
  CHECK(a.cross_im.value == b.cross_im.value);
  CHECK(a.out_power.value == b.out_power.value);
  CHECK(a.delta.value == b.delta.value);
  CHECK(a.gamma.value == b.gamma.value);
  CHECK(a.mse.value == b.mse.value);
  CHECK(a.mse.std_error == b.mse.std_error);
}

TEST_CASE("error bars shrink like the square root of the sample count") {
  const QuantizerSpec spec = make_uniform(1, one_bit_mmse_step());
  const Channel unit{1.0};
  mc::McConfig small;
  small.samples = 100000;
  small.batches = 100;
  small.seed = 11;
  small.max_threads = 1;
  mc::McConfig big = small;
  big.samples = 1000000;

  const double se_small = mc::simulate(spec, unit, small).gmi_bits.std_error;
  const double se_big = mc::simulate(spec, unit, big).gmi_bits.std_error;
  CHECK(se_small > 0.0);
  CHECK(se_big > 0.0);
  // expected ratio ~ 1/sqrt(10) = 0.316, allow generous slack for the
  // noisiness of the error-bar estimate itself
  CHECK(se_big / se_small > 0.15);
  CHECK(se_big / se_small < 0.6);
}

TEST_CASE("one-bit simulation agrees with the closed forms") {
  const QuantizerSpec spec = make_uniform(1, one_bit_mmse_step());
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.batches = 100;
  cfg.max_threads = 0;  // thread count must not matter for the values

  cfg.seed = 1;
  const Channel unit{1.0};
  const Analytic t1 = analytic_targets(spec, unit);
  // spot values of the targets themselves (independent hand computation):
  // cross = 4/(pi sqrt(2)), out_power = 4/pi, delta = 1/pi, gamma = 1 - 2/pi
  CHECK(t1.cross_mag == doctest::Approx(0.90031631615710606).epsilon(1e-12));
  CHECK(t1.out_power == doctest::Approx(1.27323954473516268).epsilon(1e-12));
  CHECK(t1.delta == doctest::Approx(0.31830988618379067).epsilon(1e-12));
  CHECK(t1.gamma == doctest::Approx(1.0 - 2.0 / kPi).epsilon(1e-12));
  check_within_error_bars(mc::simulate(spec, unit, cfg), t1);

  cfg.seed = 2;
  const Channel ten = Channel::from_db(10.0);
  const Analytic t10 = analytic_targets(spec, ten);
  CHECK(t10.cross_mag == doctest::Approx(1.2139862).epsilon(1e-7));
  CHECK(t10.delta == doctest::Approx(0.5787452476068921).epsilon(1e-12));
  check_within_error_bars(mc::simulate(spec, ten, cfg), t10);
}

TEST_CASE("channel phase rotates the cross moment and nothing else") {
  const QuantizerSpec spec = make_uniform(4, optimal_step(4));
  const Channel unit{1.0};
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.batches = 100;
  cfg.seed = 3;
  cfg.max_threads = 1;

  const double c = std::sqrt(0.5);  // 45 degrees
  const mc::McEstimate est = mc::simulate(spec, unit, cfg, {c, c});
  const Analytic t = analytic_targets(spec, unit);
  CHECK(std::fabs(est.cross_re.value - t.cross_mag * c) <= 4.0 * est.cross_re.std_error);
  CHECK(std::fabs(est.cross_im.value - (-t.cross_mag * c)) <= 4.0 * est.cross_im.std_error);
  CHECK(std::fabs(est.out_power.value - t.out_power) <= 4.0 * est.out_power.std_error);
  CHECK(std::fabs(est.delta.value - t.delta) <= 4.0 * est.delta.std_error);
  CHECK(std::fabs(est.gmi_bits.value - t.gmi_bits) <= 4.0 * est.gmi_bits.std_error);
  CHECK(std::fabs(est.mse.value - t.mse) <= 4.0 * est.mse.std_error);
}

TEST_CASE("channel magnitude only exercises the normalization") {
  const QuantizerSpec spec = make_uniform(2, optimal_step(2));
  const Channel ch = Channel::from_db(6.0);
  mc::McConfig cfg;
  cfg.samples = 200000;
  cfg.batches = 100;
  cfg.seed = 5;
  cfg.max_threads = 1;

  const mc::McEstimate a = mc::simulate(spec, ch, cfg, {1.0, 0.0});
  const mc::McEstimate b = mc::simulate(spec, ch, cfg, {3.0, 0.0});
  // identical draws pass through an identical normalized pipeline up to
  // floating-point rounding of the gain algebra
  CHECK(a.gmi_bits.value == doctest::Approx(b.gmi_bits.value).epsilon(1e-9));
  CHECK(a.cross_re.value == doctest::Approx(b.cross_re.value).epsilon(1e-9));
  CHECK(a.out_power.value == doctest::Approx(b.out_power.value).epsilon(1e-9));
  CHECK(a.mse.value == doctest::Approx(b.mse.value).epsilon(1e-9));
}

TEST_CASE("second-order probe: orthogonality holds exactly at centroid designs") {
  const Channel unit{1.0};
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.batches = 100;
  cfg.seed = 9;
  cfg.max_threads = 0;

  // optimal uniform rule: aggregate centroid condition holds, so the
  // quantization error is uncorrelated with the output and power splits
  const QuantizerSpec u4 = make_uniform(8, optimal_step(8));
  const mc::CorrelationProbe p = mc::correlation_probe(u4, unit, cfg);
  CHECK(std::fabs(p.y_w_cross_re) < 3e-3);
  CHECK(std::fabs(p.y_w_cross_im) < 3e-3);
  CHECK(std::fabs(p.pythagoras_lhs - p.pythagoras_rhs) < 4e-3);
  CHECK(p.rho_xv == doctest::Approx(std::sqrt(0.5)).epsilon(0.003));
  CHECK(p.rho_vy == doctest::Approx(0.994212).epsilon(0.003));
  // the correlation chain rule across the markov structure X -> V -> Yq
  CHECK(std::fabs(p.rho_xy - p.rho_xv * p.rho_vy) < 2e-3);

  // converged fixed-point design: same orthogonality, cell by cell
  const QuantizerSpec l4 = lloyd_optimize(4, 1e-12).spec;
  const mc::CorrelationProbe pl = mc::correlation_probe(l4, unit, cfg);
  CHECK(std::fabs(pl.y_w_cross_re) < 3e-3);
  CHECK(std::fabs(pl.y_w_cross_im) < 3e-3);
  CHECK(std::fabs(pl.pythagoras_lhs - pl.pythagoras_rhs) < 4e-3);
  CHECK(std::fabs(pl.rho_xy - pl.rho_xv * pl.rho_vy) < 2e-3);
}

TEST_CASE("second-order probe: over-wide steps break the power split") {
  const Channel unit{1.0};
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.batches = 100;
  cfg.seed = 9;
  cfg.max_threads = 0;

  // doubled step: E[Yq conj(W)] = 4A/sqrt(2 pi) - 4B/pi = -0.074905719
  const QuantizerSpec wide = make_uniform(8, 2.0 * optimal_step(8));
  const double target = 4.0 * coeff_a(wide) / kSqrt2Pi - 4.0 * coeff_b(wide) / kPi;
  CHECK(target == doctest::Approx(-0.074905719).epsilon(1e-7));
  const mc::CorrelationProbe p = mc::correlation_probe(wide, unit, cfg);
  CHECK(std::fabs(p.y_w_cross_re - target) < 5e-3);
  CHECK(std::fabs((p.pythagoras_rhs - p.pythagoras_lhs) - (-2.0 * target)) < 1e-2);
  // the chain rule is a distributional identity, immune to the bad design
  CHECK(std::fabs(p.rho_xy - p.rho_xv * p.rho_vy) < 2e-3);
}

TEST_CASE("validation battery exposes the designed roster") {
  const auto battery = mc::validation_battery();
  CHECK(battery.size() == 8);
  for (const auto& s : battery) {
    CHECK(!s.name.empty());
    CHECK(s.spec.name == s.name);
    CHECK(!validate(s.spec));
  }
  CHECK(battery_spec(battery, "one-bit").half_levels() == 1);
  CHECK(battery_spec(battery, "uniform-b4").half_levels() == 8);
  CHECK(battery_spec(battery, "lloyd-k4").half_levels() == 4);
  CHECK(battery_spec(battery, "handpicked-nonmonotone").levels[1] ==
        doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("thread resolution follows the environment variable") {
  const QuantizerSpec spec = make_uniform(1, one_bit_mmse_step());
  const Channel unit{1.0};
  mc::McConfig cfg;
  cfg.samples = 10000;
  cfg.batches = 4;
  cfg.seed = 13;
  cfg.max_threads = 0;

  ::setenv("QRATE_THREADS", "3", 1);
  CHECK(mc::simulate(spec, unit, cfg).threads_used == 3);
  // capped by the number of batches
  ::setenv("QRATE_THREADS", "64", 1);
  CHECK(mc::simulate(spec, unit, cfg).threads_used == 4);
  // garbage is ignored, falling back to the hardware count (also capped)
  ::setenv("QRATE_THREADS", "not-a-number", 1);
  CHECK(mc::simulate(spec, unit, cfg).threads_used <= 4);
  ::unsetenv("QRATE_THREADS");

  cfg.max_threads = 2;
  CHECK(mc::simulate(spec, unit, cfg).threads_used == 2);
}

TEST_CASE("configuration and channel errors are rejected") {
  const QuantizerSpec spec = make_uniform(2, 0.5);
  const Channel unit{1.0};
  mc::McConfig cfg;
  cfg.samples = 1000;
  cfg.batches = 10;

  mc::McConfig bad = cfg;
  bad.samples = 0;
  CHECK_THROWS_AS(mc::simulate(spec, unit, bad), std::invalid_argument);
  bad = cfg;
  bad.batches = 0;
  CHECK_THROWS_AS(mc::simulate(spec, unit, bad), std::invalid_argument);
  bad = cfg;
  bad.batches = 7;  // does not divide 1000
  CHECK_THROWS_AS(mc::simulate(spec, unit, bad), std::invalid_argument);

  CHECK_THROWS_AS(mc::simulate(spec, Channel{0.0}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(mc::simulate(spec, Channel{-2.0}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(mc::simulate(spec, unit, cfg, {0.0, 0.0}), std::invalid_argument);

  QuantizerSpec broken = spec;
  broken.levels[0] = -1.0;
  CHECK_THROWS_AS(mc::simulate(broken, unit, cfg), std::invalid_argument);
  CHECK_THROWS_AS(mc::correlation_probe(broken, unit, cfg), std::invalid_argument);
}
