#include "qrate/mcsim.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qrate/lloyd.hpp"
#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

namespace qrate::mc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::uint64_t join64(std::uint32_t lo, std::uint32_t hi) {
  return std::uint64_t(lo) | (std::uint64_t(hi) << 32);
}

// 53-bit mantissa draws. The open-at-zero variant shifts the lattice by one
// ulp so log() in the Box-Muller radius never sees 0.
inline double unit_open_at_zero(std::uint64_t x) {
  return double((x >> 11) + 1) * 0x1p-53;
}
inline double unit_closed_at_zero(std::uint64_t x) {
  return double(x >> 11) * 0x1p-53;
}

struct NormalPair {
  double z0, z1;
};

// One Philox block -> two independent standard normals.
inline NormalPair block_to_normals(const std::array<std::uint32_t, 4>& r) {
  const double u1 = unit_open_at_zero(join64(r[0], r[1]));
  const double u2 = unit_closed_at_zero(join64(r[2], r[3]));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

struct BatchSums {
  double cross_re = 0.0;
  double cross_im = 0.0;
  double out_power = 0.0;
  double in_power = 0.0;
  double mse = 0.0;
  // extra second-order sums for the correlation probe
  double v_power = 0.0;
  double w_power = 0.0;
  double yv_re = 0.0;
  double yv_im = 0.0;
  double xv_re = 0.0;
  double xv_im = 0.0;
};

unsigned resolve_threads(unsigned max_threads, std::size_t batches) {
  unsigned n = max_threads;
  if (n == 0) {
    if (const char* env = std::getenv("QRATE_THREADS")) {
      char* end = nullptr;
      const long parsed = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && parsed > 0) n = unsigned(parsed);
    }
  }
  if (n == 0) n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (std::uint64_t(n) > batches) n = unsigned(batches);
  return n;
}

void check_config(const McConfig& cfg) {
  if (cfg.samples == 0) throw std::invalid_argument("mc: samples must be positive");
  if (cfg.batches == 0) throw std::invalid_argument("mc: batches must be positive");
  if (cfg.samples % cfg.batches != 0)
    throw std::invalid_argument("mc: batches must divide samples");
  if (cfg.batches > 0xFFFFFFFFull)
    throw std::invalid_argument("mc: batches must fit in 32 bits");
}

// Accumulate one batch. The random stream of sample i of batch b is keyed
// by the seed and addressed by (i, b, block) alone, so the partition of
// batches over threads cannot change any draw.
BatchSums run_batch(const QuantizerSpec& spec, double snr, std::complex<double> h,
                    std::uint64_t seed, std::uint32_t batch, std::uint64_t batch_samples) {
  const std::array<std::uint32_t, 2> key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
  const double habs = std::abs(h);
  const double sigma_noise = habs / std::sqrt(snr);      // per component
  const double sigma_out = habs * std::sqrt(1.0 + 1.0 / snr);

  BatchSums s;
  for (std::uint64_t i = 0; i < batch_samples; ++i) {
    const std::uint32_t ilo = std::uint32_t(i);
    const std::uint32_t ihi = std::uint32_t(i >> 32);
    const NormalPair gx = block_to_normals(philox4x32({ilo, ihi, batch, 0}, key));
    const NormalPair gz = block_to_normals(philox4x32({ilo, ihi, batch, 1}, key));

    const std::complex<double> x{gx.z0, gx.z1};
    const std::complex<double> y = h * x + std::complex<double>{sigma_noise * gz.z0,
                                                                sigma_noise * gz.z1};
    const double vr = y.real() / sigma_out;
    const double vi = y.imag() / sigma_out;
    const double qr = quantize(spec, vr);
    const double qi = quantize(spec, vi);

    s.cross_re += x.real() * qr + x.imag() * qi;
    s.cross_im += x.imag() * qr - x.real() * qi;
    s.out_power += qr * qr + qi * qi;
    s.in_power += std::norm(x);
    const double er = qr - vr;
    const double ei = qi - vi;
    s.mse += 0.5 * (er * er + ei * ei);
    s.v_power += vr * vr + vi * vi;
    s.w_power += er * er + ei * ei;
    // Yq conj(V) and X conj(V)
    s.yv_re += qr * vr + qi * vi;
    s.yv_im += qi * vr - qr * vi;
    s.xv_re += x.real() * vr + x.imag() * vi;
    s.xv_im += x.imag() * vr - x.real() * vi;
  }
  return s;
}

std::vector<BatchSums> run_all_batches(const QuantizerSpec& spec, Channel ch, const McConfig& cfg,
                                       std::complex<double> h, unsigned* threads_used) {
  require_valid(spec);
  check_config(cfg);
  if (!(ch.snr > 0.0) || !std::isfinite(ch.snr))
    throw std::invalid_argument("mc: snr must be positive and finite");
  if (!(std::abs(h) > 0.0) || !std::isfinite(std::abs(h)))
    throw std::invalid_argument("mc: h must be nonzero and finite");

  const std::uint64_t batch_samples = cfg.samples / cfg.batches;
  const unsigned threads = resolve_threads(cfg.max_threads, cfg.batches);
  if (threads_used) *threads_used = threads;

  std::vector<BatchSums> sums(cfg.batches);
  if (threads == 1) {
    for (std::size_t b = 0; b < cfg.batches; ++b)
      sums[b] = run_batch(spec, ch.snr, h, cfg.seed, std::uint32_t(b), batch_samples);
    return sums;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= cfg.batches) return;
      sums[b] = run_batch(spec, ch.snr, h, cfg.seed, std::uint32_t(b), batch_samples);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return sums;
}

FieldEstimate batch_means(const std::vector<double>& per_batch) {
  const std::size_t n = per_batch.size();
  double mean = 0.0;
  for (double v : per_batch) mean += v;
  mean /= double(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : per_batch) {
    const double d = v - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (double(n - 1) * double(n)))};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * counter[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * counter[2];
    counter = {std::uint32_t(p1 >> 32) ^ counter[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ counter[3] ^ key[1], std::uint32_t(p0)};
  }
  return counter;
}

McEstimate simulate(const QuantizerSpec& spec, Channel ch, McConfig cfg, std::complex<double> h) {
  McEstimate out;
  const std::vector<BatchSums> sums = run_all_batches(spec, ch, cfg, h, &out.threads_used);
  const double inv = double(cfg.batches) / double(cfg.samples);  // 1 / batch_samples

  const std::size_t nb = cfg.batches;
  std::vector<double> cross_re(nb), cross_im(nb), out_power(nb), delta(nb), gmi_bits(nb),
      gamma(nb), mse(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const BatchSums& s = sums[b];
    const double cre = s.cross_re * inv;
    const double cim = s.cross_im * inv;
    const double opow = s.out_power * inv;
    const double ipow = s.in_power * inv;
    const double d = (cre * cre + cim * cim) / (ipow * opow);
    cross_re[b] = cre;
    cross_im[b] = cim;
    out_power[b] = opow;
    delta[b] = d;
    gmi_bits[b] = -std::log2(1.0 - d);
    gamma[b] = ((1.0 + ch.snr) * (1.0 - d) - 1.0) / ch.snr;
    mse[b] = s.mse * inv;
  }

  out.cross_re = batch_means(cross_re);
  out.cross_im = batch_means(cross_im);
  out.out_power = batch_means(out_power);
  out.delta = batch_means(delta);
  out.gmi_bits = batch_means(gmi_bits);
  out.gamma = batch_means(gamma);
  out.mse = batch_means(mse);
  out.samples = cfg.samples;
  out.batches = cfg.batches;
  return out;
}

CorrelationProbe correlation_probe(const QuantizerSpec& spec, Channel ch, McConfig cfg,
                                   std::complex<double> h) {
  unsigned threads = 0;
  const std::vector<BatchSums> sums = run_all_batches(spec, ch, cfg, h, &threads);

  BatchSums tot;
  for (const BatchSums& s : sums) {
    tot.cross_re += s.cross_re;
    tot.cross_im += s.cross_im;
    tot.out_power += s.out_power;
    tot.in_power += s.in_power;
    tot.v_power += s.v_power;
    tot.w_power += s.w_power;
    tot.yv_re += s.yv_re;
    tot.yv_im += s.yv_im;
    tot.xv_re += s.xv_re;
    tot.xv_im += s.xv_im;
  }
  const double inv = 1.0 / double(cfg.samples);

  CorrelationProbe p;
  const double xy = std::hypot(tot.cross_re, tot.cross_im) * inv;
  const double xv = std::hypot(tot.xv_re, tot.xv_im) * inv;
  const double vy = std::hypot(tot.yv_re, tot.yv_im) * inv;
  const double xpow = tot.in_power * inv;
  const double vpow = tot.v_power * inv;
  const double ypow = tot.out_power * inv;
  p.rho_xv = xv / std::sqrt(xpow * vpow);
  p.rho_vy = vy / std::sqrt(vpow * ypow);
  p.rho_xy = xy / std::sqrt(xpow * ypow);
  // E[Yq conj(W)] = E[Yq conj(V)] - E[|Yq|^2]
  p.y_w_cross_re = tot.yv_re * inv - ypow;
  p.y_w_cross_im = tot.yv_im * inv;
  p.pythagoras_lhs = vpow;
  p.pythagoras_rhs = ypow + tot.w_power * inv;
  return p;
}

std::vector<BatterySpecimen> validation_battery() {
  std::vector<BatterySpecimen> out;
  out.push_back({"one-bit", make_uniform(1, one_bit_mmse_step())});
  out.push_back({"uniform-b2", make_uniform(2, optimal_step(2))});
  out.push_back({"uniform-b3", make_uniform(4, optimal_step(4))});
  out.push_back({"uniform-b4", make_uniform(8, optimal_step(8))});
  out.push_back({"uniform-b4-2x-step", make_uniform(8, 2.0 * optimal_step(8))});
  out.push_back({"lloyd-k4", lloyd_optimize(4).spec});

  QuantizerSpec mono;
  mono.thresholds = {0.2, 0.6, 0.7};
  mono.levels = {0.1, 0.5, 0.7, 0.9};
  mono.name = "handpicked-monotone";
  out.push_back({mono.name, mono});

  QuantizerSpec nonmono = mono;
  nonmono.levels = {0.1, 0.9, 0.8, 0.2};
  nonmono.name = "handpicked-nonmonotone";
  out.push_back({nonmono.name, nonmono});

  for (auto& s : out) s.spec.name = s.name;
  return out;
}

}  // namespace qrate::mc
