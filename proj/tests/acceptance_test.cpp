// End-to-end acceptance runs: each case prints one PASS/FAIL line for the
// behavior it certifies, at fixed seeds and pinned tolerances.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mimolab/experiment.hpp"
#include "mimolab/montecarlo.hpp"
#include "mimolab/stats.hpp"
#include "mimolab/theory.hpp"
#include "mimolab/validator.hpp"

using namespace mimolab;
namespace fs = std::filesystem;

namespace {

const RunOptions kRun = [] {
  RunOptions opt;
  opt.workers = 2;
  return opt;
}();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int idx, const std::string& label, bool pass,
            const std::string& detail) {
  std::printf("[criterion %02d] %-52s %s  (%s)\n", idx, label.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) {
    out.push_back(v);
  }
  return out;
}

LinkConfig link(std::size_t m, std::size_t n, double rate, PrecoderKind pre,
                EqualizerKind eq = EqualizerKind::kNone, double c = 0.0) {
  LinkConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.rho = 1.0;
  cfg.rate = rate;
  cfg.precoder = {pre, c};
  cfg.equalizer = eq;
  return cfg;
}

// Fit over the points whose estimate falls inside [p_lo, p_hi].
DiversityFit fit_phat_window(const std::vector<OutageEstimate>& pts,
                             double p_lo, double p_hi) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (p.p_hat >= p_lo && p.p_hat <= p_hi &&
        p.outage_count >= kMinOutageCountForFit) {
      lo = std::min(lo, p.snr_db);
      hi = std::max(hi, p.snr_db);
    }
  }
  return fit_diversity(pts, lo - 1e-9, hi + 1e-9, p_lo);
}

DiversityFit fit_all_usable(const std::vector<OutageEstimate>& pts) {
  return fit_diversity(pts, pts.front().snr_db - 1e-9,
                       pts.back().snr_db + 1e-9, 0.0);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 2x2 zero-forcing reference sweeps shared by several criteria.
struct ZfReference {
  std::vector<OutageEstimate> min_power;
  std::vector<OutageEstimate> max_throughput;
  double slope_min = 0.0;
  double slope_max = 0.0;
};

const ZfReference& zf22_reference() {
  static const ZfReference ref = [] {
    ZfReference r;
    const auto g = grid(15, 45, 5);
    r.min_power = sweep(link(2, 2, 2.5, PrecoderKind::kZfMinPower), g,
                        10000000, 202, kRun);
    r.max_throughput = sweep(link(2, 2, 2.5, PrecoderKind::kZfMaxThroughput),
                             g, 10000000, 202, kRun);
    r.slope_min = fit_phat_window(r.min_power, 1e-4, 1e-1).slope;
    r.slope_max = fit_phat_window(r.max_throughput, 1e-4, 1e-1).slope;
    return r;
  }();
  return ref;
}

}  // namespace

TEST_CASE("criterion 01: scalar rayleigh outage against the closed form") {
  Stopwatch timer;
  const auto points =
      sweep(link(1, 1, 2.0, PrecoderKind::kZfMinPower), grid(0, 30, 1),
            1000000, 20250806, kRun);
  int outside = 0;
  for (const auto& p : points) {
    const double rho = std::pow(10.0, p.snr_db / 10.0);
    const double oracle = 1.0 - std::exp(-3.0 / rho);
    if (oracle < p.ci_low || oracle > p.ci_high) {
      ++outside;
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = outside == 0 && elapsed < 60.0;
  report(1, "1x1 outage inside 95% interval at 31 points", pass,
         fmt("%d points outside, %.1f s", outside, elapsed));
  CHECK(outside == 0);
  CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 02: 2x2 zero-forcing diversity is one") {
  const ZfReference& ref = zf22_reference();
  const bool pass_min = std::abs(ref.slope_min + 1.0) <= 0.15;
  const bool pass_max = std::abs(ref.slope_max + 1.0) <= 0.15;
  report(2, "min-power and water-filled slopes at -1 +/- 0.15",
         pass_min && pass_max,
         fmt("slopes %.3f / %.3f", ref.slope_min, ref.slope_max));
  CHECK(pass_min);
  CHECK(pass_max);
}

TEST_CASE("criterion 03: both zf designs share their slope") {
  const ZfReference& ref = zf22_reference();
  const auto g = grid(2.5, 15, 2.5);
  const auto wide_min = sweep(link(4, 2, 2.5, PrecoderKind::kZfMinPower), g,
                              10000000, 303, kRun);
  const auto wide_max =
      sweep(link(4, 2, 2.5, PrecoderKind::kZfMaxThroughput), g, 10000000,
            303, kRun);
  const double s_min = fit_phat_window(wide_min, 1e-4, 1e-1).slope;
  const double s_max = fit_phat_window(wide_max, 1e-4, 1e-1).slope;
  const double gap22 = std::abs(ref.slope_min - ref.slope_max);
  const double gap42 = std::abs(s_min - s_max);
  const bool pass = gap22 <= 0.2 && gap42 <= 0.2;
  report(3, "design agreement at 2x2 and 4x2", pass,
         fmt("2x2 gap %.3f, 4x2 gap %.3f (4x2 slopes %.2f / %.2f)", gap22,
             gap42, s_min, s_max));
  CHECK(gap22 <= 0.2);
  CHECK(gap42 <= 0.2);
}

TEST_CASE("criterion 04: wiener precoding diversity tracks the rate") {
  const auto r5 = sweep(link(3, 3, 5.0, PrecoderKind::kWiener),
                        grid(20, 45, 5), 4000000, 404, kRun);
  const double s5 = fit_phat_window(r5, 1e-4, 1e-1).slope;

  const auto r4 = sweep(link(3, 3, 4.0, PrecoderKind::kWiener),
                        grid(17, 23, 1), 4000000, 404, kRun);
  const double s4 = fit_phat_window(r4, 1e-4, 1e-2).slope;

  const auto r15 = sweep(link(3, 3, 1.5, PrecoderKind::kWiener),
                         grid(5, 11, 1), 10000000, 404, kRun);
  const double s15 = fit_all_usable(r15).slope;

  const bool pass5 = std::abs(s5 + 1.0) <= 0.2;
  const bool pass4 = std::abs(s4 + 4.0) <= 1.0;
  const bool pass15 = s15 <= -5.0;
  report(4, "3x3 slopes at rates 5 / 4 / 1.5", pass5 && pass4 && pass15,
         fmt("%.3f (-1 +/- .2), %.3f (-4 +/- 1), %.3f (<= -5)", s5, s4, s15));
  CHECK(pass5);
  CHECK(pass4);
  CHECK(pass15);
}

TEST_CASE("criterion 05: regularized and matched precoding floor and plunge") {
  // floor regime above the threshold rate
  double floor_ratio[2];
  int idx = 0;
  for (const PrecoderKind kind : {PrecoderKind::kRzf, PrecoderKind::kMf}) {
    LinkConfig cfg = link(2, 2, 4.0, kind, EqualizerKind::kNone, 2.0);
    cfg.rho = std::pow(10.0, 2.5);
    const OutageEstimate at25 = estimate_outage(cfg, 1000000, 505, kRun);
    cfg.rho = 1e4;
    const OutageEstimate at40 = estimate_outage(cfg, 1000000, 505, kRun);
    floor_ratio[idx++] = at40.p_hat / at25.p_hat;
  }
  const bool floor_pass = floor_ratio[0] >= 0.5 && floor_ratio[1] >= 0.5;

  // full-diversity regime below the threshold rate
  double p25[2], slopes[2];
  idx = 0;
  for (const PrecoderKind kind : {PrecoderKind::kRzf, PrecoderKind::kMf}) {
    LinkConfig cfg = link(2, 2, 1.9, kind, EqualizerKind::kNone, 2.0);
    cfg.rho = std::pow(10.0, 2.5);
    p25[idx] = estimate_outage(cfg, 10000000, 506, kRun).p_hat;
    const auto pts = sweep(link(2, 2, 1.9, kind, EqualizerKind::kNone, 2.0),
                           grid(8, 20, 2), 4000000, 507, kRun);
    slopes[idx] = fit_phat_window(pts, 1e-4, 1e-1).slope;
    ++idx;
  }
  const double zf_slope = zf22_reference().slope_min;
  const bool low_pass = p25[0] < 1e-3 && p25[1] < 1e-3;
  const bool slope_pass =
      slopes[0] <= -2.0 && slopes[1] <= -2.0 &&
      slopes[0] <= zf_slope - 1.0 && slopes[1] <= zf_slope - 1.0;

  report(5, "floor above R_th, steep decay below it",
         floor_pass && low_pass && slope_pass,
         fmt("floor ratios %.2f / %.2f; p(25dB) %.1e / %.1e; slopes %.2f / "
             "%.2f vs zf %.2f",
             floor_ratio[0], floor_ratio[1], p25[0], p25[1], slopes[0],
             slopes[1], zf_slope));
  CHECK(floor_pass);
  CHECK(low_pass);
  CHECK(slope_pass);
}

TEST_CASE("criterion 06: fractional diversity behind a zf equalizer") {
  const auto g = grid(20, 50, 5);
  const auto rzf22 = sweep(link(2, 2, 2.0, PrecoderKind::kRzf,
                                EqualizerKind::kZf, 2.0),
                           g, 1000000, 606, kRun);
  const auto mf22 = sweep(link(2, 2, 2.0, PrecoderKind::kMf,
                               EqualizerKind::kZf),
                          g, 1000000, 606, kRun);
  const double s_rzf22 = fit_all_usable(rzf22).slope;
  const double s_mf22 = fit_all_usable(mf22).slope;

  const auto rzf32 = sweep(link(3, 2, 2.0, PrecoderKind::kRzf,
                                EqualizerKind::kZf, 2.0),
                           g, 10000000, 607, kRun);
  const auto mf32 = sweep(link(3, 2, 2.0, PrecoderKind::kMf,
                               EqualizerKind::kZf),
                          g, 4000000, 607, kRun);
  const double s_rzf32 = fit_all_usable(rzf32).slope;
  const double s_mf32 = fit_all_usable(mf32).slope;

  const bool pass22 =
      std::abs(s_rzf22 + 0.5) <= 0.15 && std::abs(s_mf22 + 0.5) <= 0.15;
  const bool pass32 =
      std::abs(s_rzf32 + 1.0) <= 0.2 && std::abs(s_mf32 + 1.0) <= 0.2;
  report(6, "2x2 slope -0.5, 3x2 slope -1", pass22 && pass32,
         fmt("2x2: %.3f / %.3f; 3x2: %.3f / %.3f", s_rzf22, s_mf22, s_rzf32,
             s_mf32));
  CHECK(pass22);
  CHECK(pass32);
}

TEST_CASE("criterion 07: wiener precoding with zf equalization drops to zf") {
  const auto g = grid(15, 40, 5);
  const auto wf = sweep(link(2, 2, 2.0, PrecoderKind::kWiener,
                             EqualizerKind::kZf),
                        g, 4000000, 707, kRun);
  const auto zf = sweep(link(2, 2, 2.0, PrecoderKind::kZfMinPower), g,
                        4000000, 707, kRun);
  const double s_wf = fit_phat_window(wf, 1e-4, 1e-1).slope;
  const double s_zf = fit_phat_window(zf, 1e-4, 1e-1).slope;
  const bool level_pass = std::abs(s_wf + 1.0) <= 0.2;
  const bool match_pass = std::abs(s_wf - s_zf) <= 0.2;
  report(7, "2x2 slope -1 +/- 0.2, matching plain zf",
         level_pass && match_pass,
         fmt("wiener+zf %.3f vs zf %.3f", s_wf, s_zf));
  CHECK(level_pass);
  CHECK(match_pass);
}

TEST_CASE("criterion 08: matched precoding with mmse equalization") {
  const auto low = sweep(link(2, 2, 1.5, PrecoderKind::kMf,
                              EqualizerKind::kMmse),
                         grid(4, 14, 2), 4000000, 808, kRun);
  const double s_low = fit_all_usable(low).slope;

  const auto high = sweep(link(2, 2, 3.0, PrecoderKind::kMf,
                               EqualizerKind::kMmse),
                          grid(20, 50, 5), 1000000, 808, kRun);
  const double s_high = fit_all_usable(high).slope;

  const bool pass_low = s_low < -2.0;
  const bool pass_high = std::abs(s_high + 0.5) <= 0.2;
  report(8, "steeper than -2 below R_th, -0.5 above", pass_low && pass_high,
         fmt("R=1.5 slope %.3f, R=3 slope %.3f", s_low, s_high));
  CHECK(pass_low);
  CHECK(pass_high);
}

TEST_CASE("criterion 09: wiener precoder equals mmse equalizer on transpose") {
  double worst = 0.0;
  const int cases = 10000;
  for (int t = 0; t < cases; ++t) {
    TrialStream stream(909, t);
    const std::size_t n = 2 + t % 3;
    const ChannelRealization h = sample_channel(n, n, stream);
    const double rho = std::pow(10.0, 4.0 * stream.next_unit() - 1.0);
    const SinrVector precoded = sinr_wiener(h, rho);
    const SinrVector equalized =
        sinr_mmse_equalized_trace_form(h.entries.st(), rho);
    for (arma::uword k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(precoded(k) - equalized(k)) /
                                  std::max(precoded(k), 1e-300));
    }
  }
  const bool pass = worst < 1e-9;
  report(9, "per-stream equality on 1e4 square channels", pass,
         fmt("worst relative deviation %.2e", worst));
  CHECK(pass);
}

TEST_CASE("criterion 10: identity channel gives rho over N^2 exactly") {
  double worst = 0.0;
  for (const std::size_t n : {2u, 3u, 4u}) {
    const ChannelRealization id{arma::cx_mat(n, n, arma::fill::eye)};
    for (const double rho : {1.0, 10.0, 100.0}) {
      const double expect = rho / static_cast<double>(n * n);
      const std::vector<SinrVector> families = {
          sinr_rzf(id, rho, 0.7),
          sinr_rzf(id, rho, static_cast<double>(n)),
          sinr_mf(id, rho),
          sinr_precoded_zf_eq(id, rho, {PrecoderKind::kMf, 0.0}),
          sinr_precoded_mmse_eq(id, rho, {PrecoderKind::kMf, 0.0}),
      };
      for (const SinrVector& g : families) {
        for (arma::uword k = 0; k < n; ++k) {
          worst = std::max(worst, std::abs(g(k) - expect) / expect);
        }
      }
    }
  }
  const bool pass = worst <= 1e-12;
  report(10, "rzf, mf, mf+zf, mf+mmse across N and rho", pass,
         fmt("worst relative deviation %.2e", worst));
  CHECK(pass);
}

TEST_CASE("criterion 11: random-matrix validator suite at 1e7 samples") {
  Stopwatch timer;
  const std::uint64_t samples = 10000000;
  auto rho_db = [](std::initializer_list<double> dbs) {
    std::vector<double> out;
    for (const double db : dbs) {
      out.push_back(std::pow(10.0, db / 10.0));
    }
    return out;
  };
  std::vector<DistributionCheckReport> reports;
  reports.push_back(check_small_eigenvalue_count(
      2, 2, 1, rho_db({10, 15, 20, 25}), samples, 1111, kRun));
  reports.push_back(check_small_eigenvalue_count(
      3, 2, 1, rho_db({6, 10, 14, 18}), samples, 1111, kRun));
  reports.push_back(check_small_eigenvalue_count(
      1, 1, 1, rho_db({10, 15, 20, 25}), samples, 1111, kRun));
  reports.push_back(check_lambda_min_tail(2, 2, rho_db({10, 15, 20, 25}),
                                          samples, 1112, kRun));
  reports.push_back(check_lambda_min_tail(3, 2, rho_db({6, 10, 14, 18}),
                                          samples, 1112, kRun));
  reports.push_back(check_lambda_min_tail(1, 1, rho_db({10, 15, 20, 25}),
                                          samples, 1112, kRun));
  reports.push_back(check_inverse_diag_chisquare(1, 1, samples, 1113, kRun));
  reports.push_back(check_inverse_diag_chisquare(2, 1, samples, 1113, kRun));
  reports.push_back(check_inverse_diag_chisquare(2, 2, samples, 1113, kRun));
  reports.push_back(check_unitary_entry_density(2, samples, 1114, kRun));
  reports.push_back(check_unitary_entry_density(3, samples, 1114, kRun));

  int failed = 0;
  std::string detail;
  for (const auto& r : reports) {
    if (!r.pass) {
      ++failed;
      detail += r.check + "{" + r.params + "} ";
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = failed == 0 && elapsed < 600.0;
  report(11, "eigenvalue-count, tail, chi-square and beta checks", pass,
         fmt("%zu checks, %d failed, %.0f s%s%s", reports.size(), failed,
             elapsed, detail.empty() ? "" : "; failing: ", detail.c_str()));
  for (const auto& r : reports) {
    CHECK_MESSAGE(r.pass, r.check, " {", r.params, "} statistic ",
                  r.statistic, " threshold ", r.threshold);
  }
  CHECK(elapsed < 600.0);
}

TEST_CASE("criterion 12: symbol errors decay like outage") {
  const auto ser_pts =
      sweep_ser(link(2, 2, 2.5, PrecoderKind::kZfMinPower),
                Constellation::kQpsk, grid(20, 40, 5), 4000000, 1212, kRun);
  std::vector<OutageEstimate> ser_shaped;
  for (const auto& s : ser_pts) {
    OutageEstimate p;
    p.snr_db = s.snr_db;
    p.trials = s.trials;
    p.outage_count = s.error_count;
    p.p_hat = s.ser_hat;
    ser_shaped.push_back(p);
  }
  const double ser_slope = fit_all_usable(ser_shaped).slope;
  const double outage_slope =
      fit_diversity(zf22_reference().min_power, 20.0, 40.0, 0.0).slope;
  const double gap = std::abs(ser_slope - outage_slope);
  const bool pass = gap <= 0.3;
  report(12, "2x2 qpsk ser slope vs outage slope over 20-40 dB", pass,
         fmt("ser %.3f vs outage %.3f, gap %.3f", ser_slope, outage_slope,
             gap));
  CHECK(pass);
}

TEST_CASE("criterion 13: csv output is worker-count invariant") {
  const fs::path base = fs::temp_directory_path() / "mimolab_acceptance_det";
  fs::remove_all(base);
  std::vector<std::string> csvs;
  for (const unsigned workers : {1u, 4u, 16u}) {
    const fs::path dir = base / ("w" + std::to_string(workers));
    fs::create_directories(dir);
    nlohmann::json cfg = {{"m", 2},
                          {"n", 2},
                          {"precoder", "zf_min_power"},
                          {"rates", {2.0}},
                          {"snr_db_start", 0.0},
                          {"snr_db_stop", 30.0},
                          {"snr_db_step", 10.0},
                          {"trials", 200000},
                          {"seed", 7},
                          {"workers", workers},
                          {"output_path", dir.string()}};
    std::ostringstream log;
    run_sweep(parse_experiment_config(cfg.dump()), log);
    std::ifstream in(dir / "sweep_R2.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    csvs.push_back(ss.str());
  }
  const bool pass = csvs[0] == csvs[1] && csvs[1] == csvs[2];
  report(13, "identical bytes for 1, 4 and 16 workers", pass,
         fmt("%zu bytes each", csvs[0].size()));
  CHECK(pass);
}
