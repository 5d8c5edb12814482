#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimolab/montecarlo.hpp"
#include "mimolab/sinr.hpp"
#include "mimolab/validator.hpp"

namespace mimolab {

// Flat JSON experiment description; every field is a top-level key so any
// language's standard tooling can read and write it. SNR is always dB at
// this boundary and converted to linear rho exactly once internally.
struct ExperimentConfig {
  std::size_t m = 0;
  std::size_t n = 0;
  std::string precoder;             // zf_min_power | zf_max_throughput | rzf | mf | wiener
  std::vector<std::string> precoders;  // optional: sweep several at once
  double rzf_c = 0.0;               // defaults to n when absent
  std::string equalizer = "none";   // none | zf | mmse
  std::vector<double> rates;        // b/s/Hz
  double snr_db_start = 0.0;
  double snr_db_stop = 0.0;
  double snr_db_step = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string output_path = ".";
  std::string output_format = "csv";  // csv | json
  unsigned workers = 1;

  // slope subcommand
  double window_db_lo = 0.0;
  double window_db_hi = 0.0;
  bool has_window = false;
  double min_pout = 0.0;
  double slope_tolerance = 0.3;
  std::string input_csv;  // optional: fit an existing sweep instead

  // linksim subcommand
  std::string constellation = "qpsk";  // qpsk | 16qam

  // validate subcommand
  std::vector<std::string> checks;  // small_eig_count | lambda_min | chi_square | beta
  std::uint64_t check_trials = 0;   // defaults to trials
  std::size_t small_eig_count_s = 1;
  std::vector<double> rho_db_list;  // slope-check SNR points, dB

  std::string raw_json;  // canonical dump of the parsed object (manifest)
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

LinkConfig to_link_config(const ExperimentConfig& cfg, double rate);
LinkConfig to_link_config(const ExperimentConfig& cfg, double rate,
                          const std::string& precoder);
std::vector<double> snr_grid(const ExperimentConfig& cfg);

// Subcommand drivers. Results go under cfg.output_path; progress and
// human-readable summaries go to `log`. All return 0 on success (errors are
// reported through exceptions, mapped to exit codes by the CLI).
int run_sweep(const ExperimentConfig& cfg, std::ostream& log);
int run_slope(const ExperimentConfig& cfg, std::ostream& log);
int run_validate(const ExperimentConfig& cfg, std::ostream& log);
int run_theory(const ExperimentConfig& cfg, std::ostream& log);
int run_linksim(const ExperimentConfig& cfg, std::ostream& log);

std::string report_to_json(const DistributionCheckReport& report);

}  // namespace mimolab
