#include "mimolab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mimolab/errors.hpp"
#include "mimolab/theory.hpp"
#include "mimolab/validator.hpp"

#ifndef MIMOLAB_GIT_DESCRIBE
#define MIMOLAB_GIT_DESCRIBE "unknown"
#endif

namespace mimolab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

PrecoderKind parse_precoder(const std::string& name) {
  if (name == "zf_min_power") return PrecoderKind::kZfMinPower;
  if (name == "zf_max_throughput") return PrecoderKind::kZfMaxThroughput;
  if (name == "rzf") return PrecoderKind::kRzf;
  if (name == "mf") return PrecoderKind::kMf;
  if (name == "wiener") return PrecoderKind::kWiener;
  throw ConfigError("config field 'precoder': unknown value '" + name +
                    "' (expected zf_min_power, zf_max_throughput, rzf, mf or "
                    "wiener)");
}

EqualizerKind parse_equalizer(const std::string& name) {
  if (name == "none") return EqualizerKind::kNone;
  if (name == "zf") return EqualizerKind::kZf;
  if (name == "mmse") return EqualizerKind::kMmse;
  throw ConfigError("config field 'equalizer': unknown value '" + name +
                    "' (expected none, zf or mmse)");
}

template <typename T>
T require_field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("config field '") + key + "' is required");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key +
                      "' has the wrong type");
  }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key +
                      "' has the wrong type");
  }
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string trim_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", rate);
  return buf;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs,
                    double elapsed_s, const std::string& started_at) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = json::parse(cfg.raw_json);
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.raw_json)));
  manifest["config_hash"] = hash;
  manifest["seed"] = cfg.seed;
  manifest["git_describe"] = MIMOLAB_GIT_DESCRIBE;
  manifest["started_at"] = started_at;
  manifest["elapsed_s"] = elapsed_s;
  manifest["outputs"] = outputs;
  std::ofstream out(fs::path(cfg.output_path) / "manifest.json");
  out << manifest.dump(2) << '\n';
}

void ensure_output_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_path, ec);
  if (ec) {
    throw ConfigError("config field 'output_path': cannot create '" +
                      cfg.output_path + "': " + ec.message());
  }
}

json outage_points_json(const std::vector<OutageEstimate>& pts) {
  json arr = json::array();
  for (const auto& p : pts) {
    arr.push_back({{"snr_db", p.snr_db},
                   {"trials", p.trials},
                   {"outages", p.outage_count},
                   {"p_hat", p.p_hat},
                   {"ci_low", p.ci_low},
                   {"ci_high", p.ci_high},
                   {"singular_draws", p.singular_draws}});
  }
  return arr;
}

DiversityPrediction predict_for(const ExperimentConfig& cfg, double rate) {
  PrecoderConfig pre{parse_precoder(cfg.precoder), cfg.rzf_c};
  return predicted_diversity(cfg.m, cfg.n, rate, pre,
                             parse_equalizer(cfg.equalizer));
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config must be a flat JSON object");
  }

  ExperimentConfig cfg;
  cfg.m = require_field<std::size_t>(j, "m");
  cfg.n = require_field<std::size_t>(j, "n");
  cfg.precoder = optional_field<std::string>(j, "precoder", "zf_min_power");
  cfg.precoders =
      optional_field<std::vector<std::string>>(j, "precoders", {});
  cfg.rzf_c = optional_field<double>(j, "rzf_c", static_cast<double>(cfg.n));
  cfg.equalizer = optional_field<std::string>(j, "equalizer", "none");
  cfg.rates = optional_field<std::vector<double>>(j, "rates", {});
  cfg.snr_db_start = optional_field<double>(j, "snr_db_start", 0.0);
  cfg.snr_db_stop = optional_field<double>(j, "snr_db_stop", 0.0);
  cfg.snr_db_step = optional_field<double>(j, "snr_db_step", 0.0);
  cfg.trials = optional_field<std::uint64_t>(j, "trials", 0);
  cfg.seed = optional_field<std::uint64_t>(j, "seed", 1);
  cfg.output_path = optional_field<std::string>(j, "output_path", ".");
  cfg.output_format = optional_field<std::string>(j, "output_format", "csv");
  cfg.workers = optional_field<unsigned>(j, "workers", 1);
  cfg.has_window = j.contains("window_db_lo") || j.contains("window_db_hi");
  cfg.window_db_lo = optional_field<double>(j, "window_db_lo", 0.0);
  cfg.window_db_hi = optional_field<double>(j, "window_db_hi", 0.0);
  cfg.min_pout = optional_field<double>(j, "min_pout", 0.0);
  cfg.slope_tolerance = optional_field<double>(j, "slope_tolerance", 0.3);
  cfg.input_csv = optional_field<std::string>(j, "input_csv", "");
  cfg.constellation = optional_field<std::string>(j, "constellation", "qpsk");
  cfg.checks = optional_field<std::vector<std::string>>(j, "checks", {});
  cfg.check_trials = optional_field<std::uint64_t>(j, "check_trials", cfg.trials);
  cfg.small_eig_count_s = optional_field<std::size_t>(j, "small_eig_count_s", 1);
  cfg.rho_db_list = optional_field<std::vector<double>>(j, "rho_db_list", {});
  cfg.raw_json = j.dump();

  // structural checks shared by every subcommand
  if (cfg.n < 1 || cfg.m < cfg.n) {
    throw ConfigError("config fields 'm'/'n': need m >= n >= 1");
  }
  parse_precoder(cfg.precoder);
  for (const std::string& name : cfg.precoders) {
    parse_precoder(name);
  }
  parse_equalizer(cfg.equalizer);
  if (cfg.precoder == "rzf" && !(cfg.rzf_c > 0.0)) {
    throw ConfigError("config field 'rzf_c': must be positive");
  }
  if (cfg.output_format != "csv" && cfg.output_format != "json") {
    throw ConfigError("config field 'output_format': expected csv or json");
  }
  if (cfg.workers < 1) {
    throw ConfigError("config field 'workers': must be >= 1");
  }
  if (cfg.constellation != "qpsk" && cfg.constellation != "16qam") {
    throw ConfigError("config field 'constellation': expected qpsk or 16qam");
  }
  for (const double r : cfg.rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigError("config field 'rates': entries must be finite and >= 0");
    }
  }
  return cfg;
}

LinkConfig to_link_config(const ExperimentConfig& cfg, double rate) {
  return to_link_config(cfg, rate, cfg.precoder);
}

LinkConfig to_link_config(const ExperimentConfig& cfg, double rate,
                          const std::string& precoder) {
  LinkConfig link;
  link.m = cfg.m;
  link.n = cfg.n;
  link.rate = rate;
  link.rho = 1.0;
  link.precoder = {parse_precoder(precoder), cfg.rzf_c};
  link.equalizer = parse_equalizer(cfg.equalizer);
  validate_link_config(link);
  return link;
}

std::vector<double> snr_grid(const ExperimentConfig& cfg) {
  if (!(cfg.snr_db_step > 0.0)) {
    throw ConfigError("config field 'snr_db_step': must be positive");
  }
  if (cfg.snr_db_stop < cfg.snr_db_start) {
    throw ConfigError("config field 'snr_db_stop': must be >= snr_db_start");
  }
  std::vector<double> grid;
  for (double v = cfg.snr_db_start; v <= cfg.snr_db_stop + 1e-9;
       v += cfg.snr_db_step) {
    grid.push_back(v);
  }
  return grid;
}

int run_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.rates.empty()) {
    throw ConfigError("config field 'rates': at least one rate is required");
  }
  if (cfg.trials < 1) {
    throw ConfigError("config field 'trials': must be >= 1");
  }
  const std::vector<double> grid = snr_grid(cfg);
  ensure_output_dir(cfg);
  const std::string started_at = iso_utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  RunOptions opt;
  opt.workers = cfg.workers;
  const bool multi = !cfg.precoders.empty();
  const std::vector<std::string> precoder_names =
      multi ? cfg.precoders : std::vector<std::string>{cfg.precoder};
  // every (precoder, rate) cell must validate before any trials run
  for (const std::string& precoder : precoder_names) {
    for (const double rate : cfg.rates) {
      to_link_config(cfg, rate, precoder);
    }
  }
  std::vector<std::string> outputs;
  for (const std::string& precoder : precoder_names) {
    for (const double rate : cfg.rates) {
      const LinkConfig link = to_link_config(cfg, rate, precoder);
      log << "sweep: " << precoder << "+" << cfg.equalizer << " " << cfg.m
          << "x" << cfg.n << " R=" << rate << " over " << grid.size()
          << " points, " << cfg.trials << " trials each\n";
      const auto points = sweep(link, grid, cfg.trials, cfg.seed, opt, true);
      const std::string stem = multi
                                   ? "sweep_" + precoder + "_R" + trim_rate(rate)
                                   : "sweep_R" + trim_rate(rate);
      if (cfg.output_format == "csv") {
        const std::string name = stem + ".csv";
        std::ofstream out(fs::path(cfg.output_path) / name);
        write_outage_csv(out, points);
        outputs.push_back(name);
      } else {
        const std::string name = stem + ".json";
        std::ofstream out(fs::path(cfg.output_path) / name);
        out << outage_points_json(points).dump(2) << '\n';
        outputs.push_back(name);
      }
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(cfg, "sweep", outputs, elapsed, started_at);
  log << "sweep: wrote " << outputs.size() << " file(s) + manifest.json under "
      << cfg.output_path << " in " << elapsed << " s\n";
  return 0;
}

int run_slope(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.has_window) {
    throw ConfigError(
        "config fields 'window_db_lo'/'window_db_hi': a fit window is "
        "required (the tool never auto-selects one)");
  }
  ensure_output_dir(cfg);
  const std::string started_at = iso_utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions opt;
  opt.workers = cfg.workers;

  std::vector<std::pair<double, std::vector<OutageEstimate>>> sweeps;
  if (!cfg.input_csv.empty()) {
    std::ifstream in(cfg.input_csv);
    if (!in) {
      throw ConfigError("config field 'input_csv': cannot read '" +
                        cfg.input_csv + "'");
    }
    if (cfg.rates.size() != 1) {
      throw ConfigError(
          "config field 'rates': exactly one rate must accompany input_csv");
    }
    sweeps.emplace_back(cfg.rates[0], read_outage_csv(in));
  } else {
    if (cfg.rates.empty()) {
      throw ConfigError("config field 'rates': at least one rate is required");
    }
    if (cfg.trials < 1) {
      throw ConfigError("config field 'trials': must be >= 1");
    }
    const std::vector<double> grid = snr_grid(cfg);
    for (const double rate : cfg.rates) {
      sweeps.emplace_back(rate,
                          sweep(to_link_config(cfg, rate), grid, cfg.trials,
                                cfg.seed, opt));
    }
  }

  json results = json::array();
  for (const auto& [rate, points] : sweeps) {
    const DiversityFit fit = fit_diversity(points, cfg.window_db_lo,
                                           cfg.window_db_hi, cfg.min_pout);
    const DiversityPrediction predicted = predict_for(cfg, rate);
    const double deviation = std::abs(fit.slope - (-predicted.value));
    const bool pass = deviation <= cfg.slope_tolerance;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "slope: R=%g fitted=%.4f +/- %.4f predicted=%.4f "
                  "deviation=%.4f tolerance=%.4f %s\n",
                  rate, fit.slope, fit.slope_stderr, -predicted.value,
                  deviation, cfg.slope_tolerance, pass ? "PASS" : "FAIL");
    log << line;
    results.push_back({{"rate", rate},
                       {"fitted_slope", fit.slope},
                       {"slope_stderr", fit.slope_stderr},
                       {"intercept", fit.intercept},
                       {"points_used", fit.points_used},
                       {"window_db", {fit.window_db[0], fit.window_db[1]}},
                       {"predicted_diversity", predicted.value},
                       {"regime_note", predicted.regime_note},
                       {"deviation", deviation},
                       {"tolerance", cfg.slope_tolerance},
                       {"pass", pass}});
  }
  std::ofstream out(fs::path(cfg.output_path) / "slope.json");
  out << results.dump(2) << '\n';
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(cfg, "slope", {"slope.json"}, elapsed, started_at);
  return 0;
}

std::string report_to_json(const DistributionCheckReport& report) {
  json j = {{"check", report.check},   {"params", report.params},
            {"statistic", report.statistic}, {"threshold", report.threshold},
            {"pass", report.pass},     {"samples", report.samples}};
  if (report.check == "small_eig_count" || report.check == "lambda_min_tail") {
    j["fitted_slope"] = report.fitted;
    j["target_slope"] = report.target;
  }
  return j.dump();
}

int run_validate(const ExperimentConfig& cfg, std::ostream& log) {
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) {
    checks = {"small_eig_count", "lambda_min", "chi_square", "beta"};
  }
  const std::uint64_t trials = cfg.check_trials > 0 ? cfg.check_trials : 1000000;
  std::vector<double> rho_list;
  if (cfg.rho_db_list.empty()) {
    for (const double db : {6.0, 10.0, 14.0, 18.0, 22.0}) {
      rho_list.push_back(std::pow(10.0, db / 10.0));
    }
  } else {
    for (const double db : cfg.rho_db_list) {
      rho_list.push_back(std::pow(10.0, db / 10.0));
    }
  }
  ensure_output_dir(cfg);
  const std::string started_at = iso_utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions opt;
  opt.workers = cfg.workers;

  std::vector<std::string> lines;
  for (const std::string& name : checks) {
    DistributionCheckReport report;
    if (name == "small_eig_count") {
      report = check_small_eigenvalue_count(
          cfg.m, cfg.n, cfg.small_eig_count_s, rho_list, trials, cfg.seed,
          opt);
    } else if (name == "lambda_min") {
      report = check_lambda_min_tail(cfg.m, cfg.n, rho_list, trials, cfg.seed,
                                     opt);
    } else if (name == "chi_square") {
      report = check_inverse_diag_chisquare(cfg.m, cfg.n, trials, cfg.seed,
                                            opt);
    } else if (name == "beta") {
      report = check_unitary_entry_density(cfg.n, trials, cfg.seed, opt);
    } else {
      throw ConfigError("config field 'checks': unknown check '" + name +
                        "' (expected small_eig_count, lambda_min, chi_square or beta)");
    }
    const std::string line = report_to_json(report);
    log << line << '\n';
    lines.push_back(line);
  }
  std::ofstream out(fs::path(cfg.output_path) / "validate_reports.jsonl");
  for (const auto& line : lines) {
    out << line << '\n';
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(cfg, "validate", {"validate_reports.jsonl"}, elapsed,
                 started_at);
  return 0;
}

int run_theory(const ExperimentConfig& cfg, std::ostream& log) {
  std::vector<double> rates = cfg.rates;
  if (rates.empty()) {
    rates = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
  }
  const auto rows = diversity_table(cfg.m, cfg.n, rates, cfg.rzf_c);
  ensure_output_dir(cfg);
  const std::string started_at = iso_utc_now();
  std::ofstream out(fs::path(cfg.output_path) / "diversity_table.csv");
  write_diversity_table_csv(out, rows);
  write_manifest(cfg, "theory", {"diversity_table.csv"}, 0.0, started_at);
  log << "theory: wrote " << rows.size() << " rows to diversity_table.csv\n";
  return 0;
}

int run_linksim(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.trials < 1) {
    throw ConfigError("config field 'trials': must be >= 1");
  }
  const double rate = cfg.rates.empty() ? 0.0 : cfg.rates[0];
  const LinkConfig link = to_link_config(cfg, rate);
  const std::vector<double> grid = snr_grid(cfg);
  const Constellation constellation = cfg.constellation == "qpsk"
                                          ? Constellation::kQpsk
                                          : Constellation::k16Qam;
  ensure_output_dir(cfg);
  const std::string started_at = iso_utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions opt;
  opt.workers = cfg.workers;
  const auto points =
      sweep_ser(link, constellation, grid, cfg.trials, cfg.seed, opt);
  const std::string name = std::string("ser_") + cfg.constellation + ".csv";
  std::ofstream out(fs::path(cfg.output_path) / name);
  write_ser_csv(out, points);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(cfg, "linksim", {name}, elapsed, started_at);
  log << "linksim: wrote " << name << " in " << elapsed << " s\n";
  return 0;
}

}  // namespace mimolab
