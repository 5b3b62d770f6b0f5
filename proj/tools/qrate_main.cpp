// Command-line front end. Every number printed here comes from a library
// call; this file only parses flags, formats output, and sets exit codes:
// 0 success, 1 verification failure, 2 input error.

#include <clocale>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrate/asymptotics.hpp"
#include "qrate/lloyd.hpp"
#include "qrate/mcsim.hpp"
#include "qrate/quantizer.hpp"
#include "qrate/rate.hpp"
#include "qrate/serialize.hpp"
#include "qrate/specfun.hpp"
#include "qrate/uniform_opt.hpp"

namespace {

using nlohmann::json;
using namespace qrate;

// Full round-trip precision for CSV cells, locale-independent.
std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Writes rows to a file, or stdout when path is "-" or empty.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
      os_ = &file_;
    } else {
      os_ = &std::cout;
    }
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *os_ << ',';
      *os_ << cells[i];
    }
    *os_ << '\n';
  }
  void numbers(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(num17(v));
    row(s);
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

json report_to_json(const QuantizerSpec& spec, Channel ch, const RateReport& r) {
  json j;
  j["name"] = spec.name.empty() ? "(unnamed)" : spec.name;
  j["half_levels"] = spec.half_levels();
  j["bits"] = spec.bits();
  j["snr_db"] = ch.snr_db();
  j["snr"] = ch.snr;
  j["coeff_a"] = r.coeff_a;
  j["coeff_b"] = r.coeff_b;
  j["gamma"] = r.gamma;
  j["gmi_nats"] = r.gmi_nats;
  j["gmi_bits"] = r.gmi_bits;
  j["capacity_bits"] = r.capacity_bits;
  j["rate_loss_bits"] = r.rate_loss_bits;
  j["effective_snr"] = r.effective_snr;
  j["effective_snr_db"] = 10.0 * std::log10(r.effective_snr);
  j["saturation_bits"] = r.saturation_bits;
  j["mse"] = mse(spec);
  return j;
}

// ---------------------------------------------------------------- rate ---

struct RateArgs {
  std::string spec_path;
  double snr_db = 10.0;
  bool as_json = false;
};

int run_rate(const RateArgs& a) {
  const QuantizerSpec spec = load_spec_file(a.spec_path);
  const Channel ch = Channel::from_db(a.snr_db);
  const RateReport r = gmi(spec, ch);
  if (a.as_json) {
    std::cout << report_to_json(spec, ch, r).dump(2) << '\n';
    return 0;
  }
  std::printf("quantizer      : %s, K=%zu (%.4g bits/component)\n",
              spec.name.empty() ? "(unnamed)" : spec.name.c_str(), spec.half_levels(),
              spec.bits());
  std::printf("snr            : %.4f dB (%.6g linear)\n", a.snr_db, ch.snr);
  std::printf("A, B           : %.10f, %.10f\n", r.coeff_a, r.coeff_b);
  std::printf("gamma          : %.10g\n", r.gamma);
  std::printf("mse            : %.10g\n", mse(spec));
  std::printf("gmi            : %.6f bits (%.6f nats)\n", r.gmi_bits, r.gmi_nats);
  std::printf("capacity       : %.6f bits, rate loss %.6f bits\n", r.capacity_bits,
              r.rate_loss_bits);
  std::printf("effective snr  : %.4f dB\n", 10.0 * std::log10(r.effective_snr));
  std::printf("saturation rate: %.6f bits\n", r.saturation_bits);
  return 0;
}

// --------------------------------------------------------------- table ---

struct TableArgs {
  int max_bits = 12;
  std::string output = "-";
};

int run_table(const TableArgs& a) {
  CsvSink out(a.output);
  out.row({"bits", "half_levels", "loading", "step", "mmse", "mmse_approx", "snr_q_db",
           "saturation_bits", "sat_approx_bits"});
  for (int b = 1; b <= a.max_bits; ++b) {
    const UniformDesignRow r = table_row(b);
    out.numbers({double(r.bits), double(r.half_levels), r.loading, r.step, r.mmse, r.mmse_approx,
                 r.snr_q_db, r.saturation_bits, r.sat_approx_bits});
  }
  return 0;
}

// --------------------------------------------------------------- sweep ---

struct SweepArgs {
  std::string variable;
  std::vector<double> grid;
  double grid_min = 0.0, grid_max = 0.0;
  int grid_points = 0;
  bool grid_log = false;
  int bits = 4;
  double snr_db = 20.0;
  std::string spec_path;
  std::string mode = "both";
  bool approx = false;
  std::string output = "-";
};

std::vector<double> build_grid(const SweepArgs& a) {
  std::vector<double> g = a.grid;
  if (!g.empty() && a.grid_points > 0)
    throw std::runtime_error("give either --grid or --grid-min/max/points, not both");
  if (g.empty()) {
    if (a.grid_points < 2) throw std::runtime_error("--grid-points must be >= 2");
    if (!(a.grid_max > a.grid_min)) throw std::runtime_error("--grid-max must exceed --grid-min");
    if (a.grid_log && !(a.grid_min > 0.0))
      throw std::runtime_error("--grid-log needs a positive --grid-min");
    g.resize(std::size_t(a.grid_points));
    for (int i = 0; i < a.grid_points; ++i) {
      const double t = double(i) / double(a.grid_points - 1);
      g[std::size_t(i)] = a.grid_log
                              ? a.grid_min * std::pow(a.grid_max / a.grid_min, t)
                              : a.grid_min + (a.grid_max - a.grid_min) * t;
    }
  }
  if (g.empty()) throw std::runtime_error("sweep grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw std::runtime_error("sweep grid must be strictly increasing");
  return g;
}

int run_sweep(const SweepArgs& a) {
  const std::vector<double> grid = build_grid(a);
  CsvSink out(a.output);

  if (a.variable == "loading_factor") {
    const std::size_t K = std::size_t(1) << (a.bits - 1);
    const Channel ch = Channel::from_db(a.snr_db);
    std::vector<std::string> header = {"loading", "step", "gamma", "mse", "gmi_bits"};
    if (a.approx) {
      header.insert(header.end(), {"mse_hat", "gamma_bar", "gmi_underload_bits"});
    }
    out.row(header);
    for (double L : grid) {
      const double step = L / double(K);
      const RateReport r = gmi_uniform(K, step, ch);
      std::vector<double> cells = {L, step, r.gamma, mse_uniform(K, step), r.gmi_bits};
      if (a.approx) {
        cells.push_back(mse_hat(L, K));
        cells.push_back(gamma_bar(L));
        cells.push_back(underload_gmi_approx_nats(L, K, ch) / std::log(2.0));
      }
      out.numbers(cells);
    }
    return 0;
  }

  if (a.variable == "snr_db") {
    QuantizerSpec spec;
    bool from_bits = a.spec_path.empty();
    if (from_bits) {
      const std::size_t K = std::size_t(1) << (a.bits - 1);
      spec = make_uniform(K, K == 1 ? one_bit_mmse_step() : optimal_step(K));
    } else {
      spec = load_spec_file(a.spec_path);
    }
    std::vector<std::string> header = {"snr_db",        "gamma",           "gmi_bits",
                                       "capacity_bits", "rate_loss_bits",  "saturation_bits"};
    if (a.approx) {
      header.push_back("aqnm_bits");
      if (from_bits) header.push_back("gmi_hat_bits");
    }
    out.row(header);
    for (double sdb : grid) {
      const Channel ch = Channel::from_db(sdb);
      const RateReport r = gmi(spec, ch);
      std::vector<double> cells = {sdb,           r.gamma,          r.gmi_bits,
                                   r.capacity_bits, r.rate_loss_bits, r.saturation_bits};
      if (a.approx) {
        cells.push_back(aqnm_rate_estimate_bits(spec, ch));
        if (from_bits) cells.push_back(gmi_hat_bits(a.bits, ch));
      }
      out.numbers(cells);
    }
    return 0;
  }

  if (a.variable == "bits") {
    const Channel ch = Channel::from_db(a.snr_db);
    for (double bd : grid) {
      const int b = int(std::lround(bd));
      if (std::fabs(bd - double(b)) > 1e-9 || b < 1 || b > 16)
        throw std::runtime_error("bits sweep grid entries must be integers in 1..16");
    }
    std::vector<std::string> header = {"bits", "loading", "step",
                                       "mmse", "gmi_bits", "saturation_bits"};
    if (a.approx) {
      header.insert(header.end(), {"mmse_approx", "gmi_hat_bits", "sat_hat_bits"});
    }
    out.row(header);
    for (double bd : grid) {
      const int b = int(std::lround(bd));
      const UniformDesignRow row = table_row(b);
      const RateReport r = max_gmi(b, ch);
      std::vector<double> cells = {double(b), row.loading,  row.step,
                                   row.mmse,  r.gmi_bits, row.saturation_bits};
      if (a.approx) {
        cells.push_back(row.mmse_approx);
        cells.push_back(gmi_hat_bits(b, ch));
        cells.push_back(row.sat_approx_bits);
      }
      out.numbers(cells);
    }
    return 0;
  }

  // gain_scale
  if (a.spec_path.empty())
    throw std::runtime_error("gain_scale sweeps need --spec (quantizer file)");
  const QuantizerSpec spec = load_spec_file(a.spec_path);
  const Channel ch = Channel::from_db(a.snr_db);
  const ScaleMode mode = a.mode == "thresholds" ? ScaleMode::thresholds_only
                                                : ScaleMode::thresholds_and_levels;
  const ProbeResult probe = consistency_probe(spec, grid, ch, mode);
  std::vector<std::string> header = {"scale", "gamma", "mse", "gmi_bits"};
  if (a.approx) header.push_back("aqnm_bits");
  out.row(header);
  for (const ProbePoint& p : probe.points) {
    std::vector<double> cells = {p.scale, p.gamma, p.mse, p.gmi_bits};
    if (a.approx) cells.push_back(aqnm_rate_estimate_bits(scaled(spec, p.scale, mode), ch));
    out.numbers(cells);
  }
  return 0;
}

// ------------------------------------------------------------ optimize ---

struct OptimizeArgs {
  int bits = 0;
  int lloyd_k = 0;
  bool as_json = false;
};

int run_optimize(const OptimizeArgs& a) {
  if (a.bits == 0 && a.lloyd_k == 0)
    throw std::runtime_error("optimize needs --bits N or --lloyd K");
  if (a.lloyd_k > 0) {
    const LloydResult lr = lloyd_optimize(std::size_t(a.lloyd_k), 1e-12);
    if (a.as_json) {
      json j;
      j["half_levels"] = a.lloyd_k;
      j["thresholds"] = lr.spec.thresholds;
      j["levels"] = lr.spec.levels;
      j["mse"] = lr.mse;
      j["gamma"] = lr.gamma;
      j["saturation_bits"] = -std::log2(lr.gamma);
      j["iterations"] = lr.iterations;
      j["converged"] = lr.converged;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    std::printf("Lloyd-Max design, K=%d (%.4g bits/component), %zu iterations%s\n", a.lloyd_k,
                lr.spec.bits(), lr.iterations, lr.converged ? "" : " (NOT converged)");
    std::printf("thresholds:");
    for (double t : lr.spec.thresholds) std::printf(" %.8f", t);
    std::printf("\nlevels    :");
    for (double y : lr.spec.levels) std::printf(" %.8f", y);
    std::printf("\nmse = %.10g, gamma = %.10g, saturation %.6f bits\n", lr.mse, lr.gamma,
                -std::log2(lr.gamma));
    return 0;
  }

  const UniformDesignRow r = table_row(a.bits);
  if (a.bits == 1) {
    if (a.as_json) {
      json j;
      j["bits"] = 1;
      j["mmse_step"] = r.step;
      j["mmse"] = r.mmse;
      j["snr_q_db"] = r.snr_q_db;
      j["saturation_bits"] = r.saturation_bits;
      j["note"] =
          "one-bit gamma is step-independent: the rate needs no gain control; "
          "the step below only minimizes the mse";
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    std::printf("one-bit quantizer: gamma = 1 - 2/pi independent of the step, so the\n"
                "achievable rate needs no gain control. The mse-minimizing step is\n");
    std::printf("step = %.6f (mse = %.8f, snr_q = %.4f dB, saturation %.6f bits)\n", r.step,
                r.mmse, r.snr_q_db, r.saturation_bits);
    return 0;
  }

  const LoadingApprox fam = lhat_family(r.half_levels);
  if (a.as_json) {
    json j;
    j["bits"] = r.bits;
    j["half_levels"] = r.half_levels;
    j["step"] = r.step;
    j["loading"] = r.loading;
    j["mmse"] = r.mmse;
    j["mmse_approx"] = r.mmse_approx;
    j["snr_q_db"] = r.snr_q_db;
    j["saturation_bits"] = r.saturation_bits;
    j["sat_approx_bits"] = r.sat_approx_bits;
    j["loading_estimates"] = {{"exact", fam.exact}, {"implicit", fam.l0},
                              {"sqrt", fam.l1},     {"two_term", fam.l2},
                              {"corrected", fam.l3}, {"linear", fam.l_linear}};
    j["loading_errors"] = {{"implicit", fam.err0}, {"sqrt", fam.err1},
                           {"two_term", fam.err2}, {"corrected", fam.err3},
                           {"linear", fam.err_linear}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::printf("optimal uniform design, b=%d (K=%zu)\n", r.bits, r.half_levels);
  std::printf("step    = %.10g\nloading = %.6f\n", r.step, r.loading);
  std::printf("mmse    = %.6e (approx ln(2K)/3K^2 = %.6e)\n", r.mmse, r.mmse_approx);
  std::printf("snr_q   = %.4f dB, saturation %.6f bits (approx %.6f)\n", r.snr_q_db,
              r.saturation_bits, r.sat_approx_bits);
  std::printf("loading estimates (value, |error|):\n");
  std::printf("  implicit  %.6f  %.2e\n", fam.l0, fam.err0);
  std::printf("  sqrt      %.6f  %.2e\n", fam.l1, fam.err1);
  std::printf("  two-term  %.6f  %.2e\n", fam.l2, fam.err2);
  std::printf("  corrected %.6f  %.2e\n", fam.l3, fam.err3);
  std::printf("  linear    %.6f  %.2e\n", fam.l_linear, fam.err_linear);
  return 0;
}

// -------------------------------------------------------------- verify ---

struct VerifyArgs {
  std::string suite = "quick";
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;  // 0: suite default
  bool inject_gamma_error = false;
};

int run_verify(const VerifyArgs& a) {
  const std::uint64_t samples =
      a.samples ? a.samples : (a.suite == "full" ? 100000000ull : 1000000ull);
  mc::McConfig cfg;
  cfg.samples = samples;
  cfg.seed = a.seed;
  if (cfg.samples % cfg.batches != 0)
    throw std::runtime_error("--samples must be a multiple of 100");

  std::size_t checks = 0, failures = 0;
  auto check = [&](const std::string& name, const char* field, double analytic,
                   const mc::FieldEstimate& est) {
    ++checks;
    const double tol = 4.0 * est.std_error;
    const bool ok = std::fabs(analytic - est.value) <= tol;
    if (!ok) ++failures;
    std::printf("[%s] %-28s %-5s analytic=%.8f mc=%.8f se=%.2e\n", ok ? " ok " : "FAIL",
                name.c_str(), field, analytic, est.value, est.std_error);
  };

  for (const mc::BatterySpecimen& item : mc::validation_battery()) {
    for (double snr_db : {0.0, 10.0}) {
      const Channel ch = Channel::from_db(snr_db);
      const RateReport r = gmi(item.spec, ch);
      const double gamma_an = r.gamma + (a.inject_gamma_error ? 0.01 : 0.0);
      const mc::McEstimate est = mc::simulate(item.spec, ch, cfg);
      const std::string name = item.name + " @ " + num6(snr_db) + " dB";
      check(name, "gmi", r.gmi_bits, est.gmi_bits);
      check(name, "gamma", gamma_an, est.gamma);
      check(name, "mse", mse(item.spec), est.mse);
    }
  }
  std::printf("verify: %zu checks, %zu failed (suite=%s, samples=%llu, seed=%llu)\n", checks,
              failures, a.suite.c_str(), (unsigned long long)samples,
              (unsigned long long)a.seed);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"achievable-rate calculator for receivers with symmetric output quantization"};
  app.require_subcommand(1);

  RateArgs rate_args;
  auto* rate_cmd = app.add_subcommand("rate", "evaluate one quantizer spec at one snr");
  rate_cmd->add_option("spec", rate_args.spec_path, "quantizer spec file (json)")->required();
  rate_cmd->add_option("--snr-db", rate_args.snr_db, "channel snr in dB")
      ->capture_default_str();
  rate_cmd->add_flag("--json", rate_args.as_json, "emit a json report");

  TableArgs table_args;
  auto* table_cmd =
      app.add_subcommand("table", "csv table of optimal uniform designs per resolution");
  table_cmd->add_option("--max-bits", table_args.max_bits, "last row (1..16)")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  table_cmd->add_option("-o,--output", table_args.output, "output file, - for stdout")
      ->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "csv sweep over loading_factor, snr_db, bits, or gain_scale");
  sweep_cmd
      ->add_option("--variable", sweep_args.variable,
                   "one of loading_factor, snr_db, bits, gain_scale")
      ->required()
      ->check(CLI::IsMember({"loading_factor", "snr_db", "bits", "gain_scale"}));
  sweep_cmd->add_option("--grid", sweep_args.grid, "explicit grid, comma separated")
      ->delimiter(',');
  sweep_cmd->add_option("--grid-min", sweep_args.grid_min, "first grid point");
  sweep_cmd->add_option("--grid-max", sweep_args.grid_max, "last grid point");
  sweep_cmd->add_option("--grid-points", sweep_args.grid_points, "number of grid points");
  sweep_cmd->add_flag("--grid-log", sweep_args.grid_log, "logarithmic grid spacing");
  sweep_cmd->add_option("--bits", sweep_args.bits, "resolution for loading_factor/snr_db")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  sweep_cmd->add_option("--snr-db", sweep_args.snr_db, "fixed snr for non-snr sweeps")
      ->capture_default_str();
  sweep_cmd->add_option("--spec", sweep_args.spec_path,
                        "quantizer file (required for gain_scale, optional for snr_db)");
  sweep_cmd
      ->add_option("--mode", sweep_args.mode,
                   "gain_scale: scale 'both' thresholds and levels, or 'thresholds' only")
      ->check(CLI::IsMember({"both", "thresholds"}))
      ->capture_default_str();
  sweep_cmd->add_flag("--approx", sweep_args.approx, "append asymptotic-approximation columns");
  sweep_cmd->add_option("-o,--output", sweep_args.output, "output file, - for stdout")
      ->capture_default_str();

  OptimizeArgs opt_args;
  auto* opt_cmd =
      app.add_subcommand("optimize", "optimal uniform design or Lloyd-Max fixed point");
  auto* opt_bits = opt_cmd->add_option("--bits", opt_args.bits, "uniform design resolution")
                       ->check(CLI::Range(1, 16));
  auto* opt_lloyd =
      opt_cmd->add_option("--lloyd", opt_args.lloyd_k, "Lloyd-Max with K positive levels")
          ->check(CLI::Range(1, 4096));
  opt_bits->excludes(opt_lloyd);
  opt_lloyd->excludes(opt_bits);
  opt_cmd->add_flag("--json", opt_args.as_json, "emit a json report");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand(
      "verify", "cross-validate analytic rates against the Monte Carlo channel");
  verify_cmd->add_option("--suite", verify_args.suite, "quick (1e6 samples) or full (1e8)")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "random seed")->capture_default_str();
  verify_cmd->add_option("--samples", verify_args.samples,
                         "override samples per case (multiple of 100)");
  verify_cmd
      ->add_flag("--inject-gamma-error", verify_args.inject_gamma_error,
                 "negative control: corrupt the analytic gamma and expect failures")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rate_cmd->parsed()) return run_rate(rate_args);
    if (table_cmd->parsed()) return run_table(table_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    if (opt_cmd->parsed()) return run_optimize(opt_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
