#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qrate/asymptotics.hpp"
#include "qrate/rate.hpp"
#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

using namespace qrate;

namespace {
// ternary search for the minimizer of a unimodal scalar function (kept
// local so the test does not lean on the library's own optimizer)
template <class F>
double argmin_unimodal(F f, double lo, double hi) {
  for (int i = 0; i < 200 && (hi - lo) > 1e-10; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("overload-only distortion factor: frozen values and limits") {
  // frozen against an independent arbitrary-precision evaluation; the
  // float64 formula itself wobbles ~1e-10 near L -> 0 (cancellation in
  // ovl - 4Q^2), so the tolerance there is wider
  CHECK(gamma_bar(1e-3) == doctest::Approx(3.6304162703840110e-01).epsilon(1e-7));
  CHECK(gamma_bar(2.0) == doctest::Approx(1.0284410272686671e-02).epsilon(1e-12));
  CHECK(gamma_bar(4.0) == doctest::Approx(6.1771483112419823e-06).epsilon(1e-9).scale(0.0));
  CHECK(gamma_bar(8.0) == doctest::Approx(3.6150128942915539e-17).epsilon(1e-9).scale(0.0));

  // approaches 1 - 2/pi from below as the loading vanishes
  const double one_bit = 1.0 - 2.0 / kPi;
  CHECK(gamma_bar(1e-3) < one_bit);
  CHECK(one_bit - gamma_bar(1e-3) == doctest::Approx(3.386007e-4).epsilon(1e-3).scale(0.0));

  // strictly below the leading-order envelope 4 phi(L)/L^3 everywhere
  for (double L : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    CHECK(gamma_bar(L) < 4.0 * phi(L) / (L * L * L));
    CHECK(gamma_bar(L) > 0.0);
  }
}

TEST_CASE("overload loss approximation tightens like 1 - 6/L^2") {
  // ratio of the true loss at snr=1 to the leading-order estimate; frozen,
  // and increasing towards 1 from below
  const Channel unit{1.0};
  constexpr double kRatio[] = {0.611519829, 0.738503333, 0.813164139,
                               0.861132913, 0.893373110, 0.915868612};
  double prev = 0.0;
  for (int L = 3; L <= 8; ++L) {
    const double r = std::log1p(gamma_bar(double(L))) / overload_loss_approx_nats(double(L), unit);
    CHECK(r == doctest::Approx(kRatio[L - 3]).epsilon(1e-7));
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
}

TEST_CASE("granular loss approximation tightens as the step shrinks") {
  // many-level regime: loss at snr=1 over step^2/12, for K = 2048
  const Channel unit{1.0};
  constexpr double kRatio[] = {0.992250270, 0.998050823, 0.999511966, 0.999877945,
                               0.999969483, 0.999992371, 0.999998093};
  double prev = 0.0;
  for (int k = 2; k <= 8; ++k) {
    const double step = std::ldexp(1.0, -k);
    const double g = gamma_factor_uniform(2048, step);
    const double r = std::log1p(g) / granular_loss_approx_nats(step, unit);
    CHECK(r == doctest::Approx(kRatio[k - 2]).epsilon(1e-6));
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
}

TEST_CASE("mse surrogate has its minimum near the true optimal loading") {
  for (int b : {6, 10}) {
    const std::size_t K = std::size_t(1) << (b - 1);
    const double lhat = argmin_unimodal([K](double L) { return mse_hat(L, K); }, 1.0, 8.0);
    const double exact = double(K) * optimal_step(K);
    CHECK(std::fabs(lhat - exact) < 0.1);
    if (b == 6) CHECK(lhat == doctest::Approx(3.394843807).epsilon(1e-6));
    if (b == 10) CHECK(lhat == doctest::Approx(4.545167640).epsilon(1e-6));
  }
}

TEST_CASE("mse surrogate tracks the exact rate loss near and above optimum") {
  // b = 6 (K = 32) at snr = 100: within ~0.2% for L in [4, 5]; degrades to
  // ~14% at L = 3 where neither term dominates cleanly
  const Channel ch = Channel::from_db(20.0);
  const std::size_t K = 32;
  constexpr struct {
    double loading, rel;
  } kRows[] = {{3.0, +0.14433}, {4.0, +0.00126}, {4.5, +0.00148}, {5.0, +0.00185}};
  for (const auto& row : kRows) {
    const double exact = std::log1p(gamma_factor_uniform(K, row.loading / double(K)) * ch.snr);
    const double approx = std::log1p(mse_hat(row.loading, K) * ch.snr);
    CHECK(std::fabs((approx - exact) / exact - row.rel) < 1e-4);
  }
}

TEST_CASE("waterfall threshold lower-bounds the saturation depth") {
  CHECK(waterfall_approx_nats(2.0) == doctest::Approx(3.612085713765).epsilon(1e-11));
  for (double L : {2.0, 2.5, 3.0, 4.0, 5.0})
    CHECK(waterfall_approx_nats(L) < -std::log(gamma_bar(L)));
}

TEST_CASE("underloaded-regime rate approximation") {
  // K = 32 driven at loading 6 (step 0.1875), snr = 100: granular noise
  // dominates and the closed form lands within 7e-4 nats
  const Channel ch = Channel::from_db(20.0);
  const double exact = gmi_uniform(32, 6.0 / 32.0, ch).gmi_nats;
  const double approx = underload_gmi_approx_nats(6.0, 32, ch);
  CHECK(exact == doctest::Approx(4.358841678).epsilon(1e-8));
  CHECK(approx == doctest::Approx(4.358179586).epsilon(1e-8));
  CHECK(std::fabs(approx - exact) < 1e-3);
}

TEST_CASE("implicit loading estimate solves its defining equation") {
  for (std::size_t K : {2u, 4u, 32u, 512u, 32768u}) {
    const double x = lhat0(K);
    const double resid =
        x * x + 6.0 * std::log(x) - std::log(18.0 / kPi) - 4.0 * std::log(2.0 * double(K));
    CHECK(std::fabs(resid) < 1e-12);
  }
  // frozen at 50-digit precision
  CHECK(lhat0(4) == doctest::Approx(2.2688624119198562).epsilon(1e-13));
  CHECK(lhat0(32) == doctest::Approx(3.3387905600208150).epsilon(1e-13));
}

TEST_CASE("loading-estimate family against frozen errors") {
  // |lhat0 - L*| per bit width, b = 2..12
  constexpr double kErr0[] = {0.115864, 0.075215, 0.036083, 0.008107, 0.008774, 0.017497,
                              0.021067, 0.021717, 0.020883, 0.019401, 0.017723};
  for (int b = 2; b <= 12; ++b) {
    const LoadingApprox fam = lhat_family(std::size_t(1) << (b - 1));
    CHECK(std::fabs(fam.err0 - kErr0[b - 2]) < 1e-5);
    // the implicit root beats the two-term expansion everywhere tested,
    // and the corrected form beats it too
    CHECK(fam.err0 < fam.err2);
    CHECK(fam.err3 < fam.err2);
    // sqrt rule overshoots, two-term expansion undershoots
    CHECK(fam.l1 > fam.exact);
    CHECK(fam.l2 < fam.exact);
    // consistency of the stored errors
    CHECK(fam.err1 == doctest::Approx(std::fabs(fam.l1 - fam.exact)).epsilon(1e-12));
    CHECK(fam.err_linear == doctest::Approx(std::fabs(fam.l_linear - fam.exact)).epsilon(1e-12));
  }
  // the implicit estimate's error is not monotone: it grows from b=5 to a
  // bump at b=9, then decays again
  double prev = lhat_family(16).err0;
  for (int b = 6; b <= 9; ++b) {
    const double e = lhat_family(std::size_t(1) << (b - 1)).err0;
    CHECK(e > prev);
    prev = e;
  }
  for (int b = 10; b <= 12; ++b) {
    const double e = lhat_family(std::size_t(1) << (b - 1)).err0;
    CHECK(e < prev);
    prev = e;
  }
  // the straight-line rule (b+4)/3 stays within 0.028 up to b = 7
  for (int b = 2; b <= 7; ++b)
    CHECK(lhat_family(std::size_t(1) << (b - 1)).err_linear < 0.028);
}

TEST_CASE("closed-form rate estimate and its distortion coefficient") {
  // 4 b ln2 / (3 4^b) is identically ln(2K)/(3K^2) for K = 2^{b-1}
  for (int b = 1; b <= 16; ++b) {
    const double K = double(std::size_t(1) << (b - 1));
    const double coeff = 4.0 * double(b) * std::numbers::ln2 / (3.0 * std::pow(4.0, double(b)));
    const double alt = std::log(2.0 * K) / (3.0 * K * K);
    CHECK(coeff == doctest::Approx(alt).epsilon(1e-14));
  }
  const Channel huge{1e12};
  CHECK(gmi_hat_bits(8, huge) == doctest::Approx(13.113728861).epsilon(1e-6));
  // increases with snr, bounded by capacity
  double prev = 0.0;
  for (double db : {0.0, 10.0, 20.0, 40.0}) {
    const Channel ch = Channel::from_db(db);
    const double g = gmi_hat_bits(6, ch);
    CHECK(g > prev);
    CHECK(g < std::log2(1.0 + ch.snr));
    prev = g;
  }
}

TEST_CASE("saturation estimate and per-bit rules of thumb") {
  CHECK(sat_hat_bits(3) == doctest::Approx(4.525037499278844).epsilon(1e-12));
  CHECK(sat_hat_bits(8) == doctest::Approx(13.11).epsilon(1e-12));
  CHECK(per_bit_rules(8).snr_q_db_rule6 == doctest::Approx(39.469100130081).epsilon(1e-9));
  CHECK(per_bit_rules(4).snr_q_db_rule5 == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(required_bits(20.0, 2.0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("asymptotic helpers reject degenerate arguments") {
  const Channel unit{1.0};
  CHECK_THROWS_AS(gamma_bar(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_bar(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_bar(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(overload_loss_approx_nats(0.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(granular_loss_approx_nats(-0.5, unit), std::invalid_argument);
  CHECK_THROWS_AS(mse_hat(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(mse_hat(3.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(underload_gmi_approx_nats(3.0, 0, unit), std::invalid_argument);
  CHECK_THROWS_AS(lhat0(0), std::invalid_argument);
  CHECK_THROWS_AS(lhat_family(1), std::invalid_argument);
  CHECK_THROWS_AS(gmi_hat_bits(0, unit), std::invalid_argument);
  CHECK_THROWS_AS(sat_hat_bits(0), std::invalid_argument);
  CHECK_THROWS_AS(per_bit_rules(-3), std::invalid_argument);
  CHECK_THROWS_AS(required_bits(10.0, -1.0), std::invalid_argument);
}
