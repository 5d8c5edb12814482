#include "mimolab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "mimolab/errors.hpp"
#include "mimolab/rng.hpp"
#include "mimolab/stats.hpp"

namespace mimolab {

namespace {

struct TrialCounts {
  std::uint64_t hits = 0;
  std::uint64_t singular = 0;
};

// Partitions [0, trials) into contiguous ranges, one per worker. Each trial
// is evaluated with its own stream, so the partition cannot change results.
template <typename PerTrial>
TrialCounts run_trials(std::uint64_t trials, unsigned workers,
                       PerTrial&& per_trial) {
  if (workers <= 1 || trials < 2 * workers) {
    TrialCounts counts;
    for (std::uint64_t t = 0; t < trials; ++t) {
      per_trial(t, counts);
    }
    return counts;
  }
  std::vector<TrialCounts> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = trials / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = (w + 1 == workers) ? trials : begin + chunk;
    pool.emplace_back([&, w, begin, end] {
      TrialCounts local;
      for (std::uint64_t t = begin; t < end; ++t) {
        per_trial(t, local);
      }
      partial[w] = local;
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  TrialCounts counts;
  for (const auto& p : partial) {
    counts.hits += p.hits;
    counts.singular += p.singular;
  }
  return counts;
}

void append_float(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

std::vector<std::complex<double>> constellation_points(Constellation c) {
  using cxd = std::complex<double>;
  std::vector<cxd> pts;
  if (c == Constellation::kQpsk) {
    const double a = 1.0 / std::sqrt(2.0);
    for (const double re : {-a, a}) {
      for (const double im : {-a, a}) {
        pts.emplace_back(re, im);
      }
    }
  } else {
    const double a = 1.0 / std::sqrt(10.0);
    for (const double re : {-3.0, -1.0, 1.0, 3.0}) {
      for (const double im : {-3.0, -1.0, 1.0, 3.0}) {
        pts.emplace_back(re * a, im * a);
      }
    }
  }
  return pts;
}

std::uint32_t nearest_point(const std::vector<std::complex<double>>& pts,
                            std::complex<double> y) {
  std::uint32_t best = 0;
  double best_d = std::norm(y - pts[0]);
  for (std::uint32_t i = 1; i < pts.size(); ++i) {
    const double d = std::norm(y - pts[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Pure-SNR configurations decouple into scalar channels; interference-limited
// ones are simulated through the full linear system.
bool has_scalar_decision_channel(const LinkConfig& cfg) {
  if (cfg.equalizer == EqualizerKind::kZf) {
    return true;
  }
  if (cfg.equalizer == EqualizerKind::kNone) {
    return cfg.precoder.kind == PrecoderKind::kZfMinPower ||
           cfg.precoder.kind == PrecoderKind::kZfMaxThroughput;
  }
  return false;
}

}  // namespace

OutageEstimate estimate_outage(const LinkConfig& cfg, std::uint64_t trials,
                               std::uint64_t seed, const RunOptions& opt) {
  validate_link_config(cfg);
  if (trials < 1) {
    throw ConfigError("estimate_outage: trials must be >= 1");
  }
  const std::uint64_t point_seed = derive_seed(seed, opt.point_index);
  const auto counts = run_trials(
      trials, opt.workers, [&](std::uint64_t t, TrialCounts& acc) {
        TrialStream stream(point_seed, t);
        const ChannelRealization h = sample_channel(cfg.m, cfg.n, stream);
        bool outage;
        try {
          outage = mutual_info(sinr_for_config(cfg, h)) <= cfg.rate;
        } catch (const SingularMatrixError&) {
          outage = true;
          ++acc.singular;
        }
        if (outage) {
          ++acc.hits;
        }
      });

  OutageEstimate est;
  est.snr_db = 10.0 * std::log10(cfg.rho);
  est.trials = trials;
  est.outage_count = counts.hits;
  est.singular_draws = counts.singular;
  est.p_hat = static_cast<double>(counts.hits) / static_cast<double>(trials);
  const WilsonInterval ci = wilson_interval(counts.hits, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

std::vector<OutageEstimate> sweep(const LinkConfig& cfg_template,
                                  const std::vector<double>& snr_db,
                                  std::uint64_t trials_per_point,
                                  std::uint64_t master_seed,
                                  const RunOptions& opt, bool progress) {
  for (std::size_t i = 1; i < snr_db.size(); ++i) {
    if (!(snr_db[i] > snr_db[i - 1])) {
      throw ConfigError("sweep: snr_db list must be strictly increasing");
    }
  }
  std::vector<OutageEstimate> out;
  out.reserve(snr_db.size());
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    LinkConfig cfg = cfg_template;
    cfg.rho = std::pow(10.0, snr_db[i] / 10.0);
    RunOptions point_opt = opt;
    point_opt.point_index = i;
    OutageEstimate est =
        estimate_outage(cfg, trials_per_point, master_seed, point_opt);
    est.snr_db = snr_db[i];
    if (progress) {
      std::fprintf(stderr,
                   "  point %zu/%zu: %.2f dB  p_hat=%.3e (%llu/%llu)\n",
                   i + 1, snr_db.size(), snr_db[i], est.p_hat,
                   static_cast<unsigned long long>(est.outage_count),
                   static_cast<unsigned long long>(est.trials));
    }
    out.push_back(est);
  }
  return out;
}

DiversityFit fit_diversity(const std::vector<OutageEstimate>& points,
                           double window_db_lo, double window_db_hi,
                           double min_pout) {
  if (!(window_db_lo < window_db_hi)) {
    throw ConfigError("fit_diversity: window_db_lo must be below window_db_hi");
  }
  std::vector<double> x, y;
  for (const auto& pt : points) {
    if (pt.snr_db < window_db_lo || pt.snr_db > window_db_hi) {
      continue;
    }
    if (pt.outage_count < kMinOutageCountForFit || pt.p_hat < min_pout ||
        pt.p_hat <= 0.0) {
      continue;
    }
    x.push_back(pt.snr_db / 10.0);  // log10(rho)
    y.push_back(std::log10(pt.p_hat));
  }
  if (x.size() < 3) {
    std::ostringstream msg;
    msg << "fit_diversity: only " << x.size() << " usable points in ["
        << window_db_lo << ", " << window_db_hi << "] dB (need >= 3; points"
        << " require outage_count >= " << kMinOutageCountForFit
        << " and p_hat >= " << min_pout << ")";
    throw InsufficientDataError(msg.str());
  }
  const LineFit line = fit_line(x, y);
  DiversityFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.slope_stderr = line.slope_stderr;
  fit.window_db = {window_db_lo, window_db_hi};
  fit.points_used = line.n;
  return fit;
}

const char* constellation_name(Constellation c) {
  return c == Constellation::kQpsk ? "qpsk" : "16qam";
}

SerEstimate simulate_ser(const LinkConfig& cfg, Constellation constellation,
                         std::uint64_t trials, std::uint64_t seed,
                         const RunOptions& opt) {
  validate_link_config(cfg);
  if (trials < 1) {
    throw ConfigError("simulate_ser: trials must be >= 1");
  }
  const auto pts = constellation_points(constellation);
  const auto count = static_cast<std::uint32_t>(pts.size());
  const bool scalar_channel = has_scalar_decision_channel(cfg);
  const std::uint64_t point_seed = derive_seed(seed, opt.point_index);

  const auto counts = run_trials(
      trials, opt.workers, [&](std::uint64_t t, TrialCounts& acc) {
        TrialStream stream(point_seed, t);
        const ChannelRealization h = sample_channel(cfg.m, cfg.n, stream);
        bool vector_error = false;
        try {
          if (scalar_channel) {
            const SinrVector g = sinr_for_config(cfg, h);
            for (arma::uword k = 0; k < g.n_elem && !vector_error; ++k) {
              const double amp = std::sqrt(g(k));
              const std::uint32_t sent = stream.next_index(count);
              const std::complex<double> y =
                  amp * pts[sent] + stream.next_cgauss();
              vector_error = nearest_point(pts, y / amp) != sent;
            }
          } else {
            const PrecoderOutput pre =
                build_precoder(cfg.precoder, h, cfg.rho);
            const arma::cx_mat composite = h.entries * pre.matrix;
            arma::cx_mat front = composite;
            arma::cx_mat equalizer;  // empty unless MMSE equalized
            if (cfg.equalizer == EqualizerKind::kMmse) {
              equalizer = build_mmse_equalizer(composite, cfg.rho);
              front = equalizer * composite;
            }
            const double sym_amp =
                std::sqrt(cfg.rho / static_cast<double>(cfg.n));
            arma::cx_vec x(cfg.n);
            arma::uvec sent(cfg.n);
            for (arma::uword k = 0; k < cfg.n; ++k) {
              sent(k) = stream.next_index(count);
              x(k) = sym_amp * pts[sent(k)];
            }
            arma::cx_vec noise(cfg.n);
            for (arma::uword k = 0; k < cfg.n; ++k) {
              noise(k) = stream.next_cgauss();
            }
            arma::cx_vec y = front * x;
            y += equalizer.is_empty() ? noise : arma::cx_vec(equalizer * noise);
            for (arma::uword k = 0; k < cfg.n && !vector_error; ++k) {
              const std::complex<double> gain = sym_amp * front(k, k);
              vector_error =
                  nearest_point(pts, y(k) / gain) != sent(k);
            }
          }
        } catch (const SingularMatrixError&) {
          vector_error = true;
          ++acc.singular;
        }
        if (vector_error) {
          ++acc.hits;
        }
      });

  SerEstimate est;
  est.snr_db = 10.0 * std::log10(cfg.rho);
  est.trials = trials;
  est.error_count = counts.hits;
  est.singular_draws = counts.singular;
  est.ser_hat = static_cast<double>(counts.hits) / static_cast<double>(trials);
  const WilsonInterval ci = wilson_interval(counts.hits, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

std::vector<SerEstimate> sweep_ser(const LinkConfig& cfg_template,
                                   Constellation constellation,
                                   const std::vector<double>& snr_db,
                                   std::uint64_t trials_per_point,
                                   std::uint64_t master_seed,
                                   const RunOptions& opt) {
  for (std::size_t i = 1; i < snr_db.size(); ++i) {
    if (!(snr_db[i] > snr_db[i - 1])) {
      throw ConfigError("sweep_ser: snr_db list must be strictly increasing");
    }
  }
  std::vector<SerEstimate> out;
  out.reserve(snr_db.size());
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    LinkConfig cfg = cfg_template;
    cfg.rho = std::pow(10.0, snr_db[i] / 10.0);
    RunOptions point_opt = opt;
    point_opt.point_index = i;
    SerEstimate est = simulate_ser(cfg, constellation, trials_per_point,
                                   master_seed, point_opt);
    est.snr_db = snr_db[i];
    out.push_back(est);
  }
  return out;
}

void write_outage_csv(std::ostream& os,
                      const std::vector<OutageEstimate>& pts) {
  os << "snr_db,trials,outages,p_hat,ci_low,ci_high,singular_draws\n";
  for (const auto& p : pts) {
    std::string line;
    append_float(line, p.snr_db);
    line += ',' + std::to_string(p.trials) + ',' +
            std::to_string(p.outage_count) + ',';
    append_float(line, p.p_hat);
    line += ',';
    append_float(line, p.ci_low);
    line += ',';
    append_float(line, p.ci_high);
    line += ',' + std::to_string(p.singular_draws) + '\n';
    os << line;
  }
}

void write_ser_csv(std::ostream& os, const std::vector<SerEstimate>& pts) {
  os << "snr_db,trials,errors,ser_hat,ci_low,ci_high,singular_draws\n";
  for (const auto& p : pts) {
    std::string line;
    append_float(line, p.snr_db);
    line += ',' + std::to_string(p.trials) + ',' +
            std::to_string(p.error_count) + ',';
    append_float(line, p.ser_hat);
    line += ',';
    append_float(line, p.ci_low);
    line += ',';
    append_float(line, p.ci_high);
    line += ',' + std::to_string(p.singular_draws) + '\n';
    os << line;
  }
}

std::vector<OutageEstimate> read_outage_csv(std::istream& is) {
  std::vector<OutageEstimate> out;
  std::string line;
  if (!std::getline(is, line)) {
    throw ConfigError("read_outage_csv: empty input");
  }
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    OutageEstimate p;
    unsigned long long trials = 0, outages = 0, singular = 0;
    if (std::sscanf(line.c_str(), "%lf,%llu,%llu,%lf,%lf,%lf,%llu", &p.snr_db,
                    &trials, &outages, &p.p_hat, &p.ci_low, &p.ci_high,
                    &singular) != 7) {
      throw ConfigError("read_outage_csv: malformed row: " + line);
    }
    p.trials = trials;
    p.outage_count = outages;
    p.singular_draws = singular;
    out.push_back(p);
  }
  return out;
}

}  // namespace mimolab
