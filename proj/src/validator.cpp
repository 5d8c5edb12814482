#include "mimolab/validator.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "mimolab/channel.hpp"
#include "mimolab/detail/smallherm.hpp"
#include "mimolab/errors.hpp"
#include "mimolab/rng.hpp"
#include "mimolab/stats.hpp"

namespace mimolab {

namespace {

// Counts trials satisfying a per-stream predicate, split across workers.
template <typename Event>
std::uint64_t count_event(std::uint64_t trials, std::uint64_t point_seed,
                          unsigned workers, Event&& event) {
  if (workers <= 1 || trials < 2 * workers) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      TrialStream stream(point_seed, t);
      if (event(stream)) {
        ++hits;
      }
    }
    return hits;
  }
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = trials / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = (w + 1 == workers) ? trials : begin + chunk;
    pool.emplace_back([&, w, begin, end] {
      std::uint64_t hits = 0;
      for (std::uint64_t t = begin; t < end; ++t) {
        TrialStream stream(point_seed, t);
        if (event(stream)) {
          ++hits;
        }
      }
      partial[w] = hits;
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  std::uint64_t hits = 0;
  for (const auto h : partial) {
    hits += h;
  }
  return hits;
}

template <typename Sampler>
std::vector<double> collect_samples(std::uint64_t trials,
                                    std::uint64_t point_seed, unsigned workers,
                                    Sampler&& sampler) {
  std::vector<double> samples(trials);
  if (workers <= 1 || trials < 2 * workers) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      TrialStream stream(point_seed, t);
      samples[t] = sampler(stream);
    }
    return samples;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = trials / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = (w + 1 == workers) ? trials : begin + chunk;
    pool.emplace_back([&, begin, end] {
      for (std::uint64_t t = begin; t < end; ++t) {
        TrialStream stream(point_seed, t);
        samples[t] = sampler(stream);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  return samples;
}

// Fits log10 P(event) against log10 rho and reports |slope - target|.
template <typename EventAtRho>
DistributionCheckReport slope_check(const std::string& name,
                                    const std::string& params,
                                    const std::vector<double>& rho_list,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers, double target_slope,
                                    EventAtRho&& event_at_rho) {
  if (rho_list.size() < 4) {
    throw ConfigError(name + ": need at least 4 SNR points for a slope fit");
  }
  for (std::size_t i = 1; i < rho_list.size(); ++i) {
    if (!(rho_list[i] > rho_list[i - 1])) {
      throw ConfigError(name + ": rho list must be strictly increasing");
    }
  }
  if (trials < 1) {
    throw ConfigError(name + ": trials must be >= 1");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < rho_list.size(); ++i) {
    const double rho = rho_list[i];
    const std::uint64_t point_seed = derive_seed(seed, i);
    const std::uint64_t hits =
        count_event(trials, point_seed, workers,
                    [&](TrialStream& stream) { return event_at_rho(rho, stream); });
    if (hits < kMinSlopeCheckCount) {
      std::ostringstream msg;
      msg << name << ": only " << hits << " events at rho=" << rho
          << " (need >= " << kMinSlopeCheckCount
          << "); increase trials or lower the SNR range";
      throw InsufficientDataError(msg.str());
    }
    x.push_back(std::log10(rho));
    y.push_back(std::log10(static_cast<double>(hits) /
                           static_cast<double>(trials)));
  }
  const LineFit fit = fit_line(x, y);
  DistributionCheckReport report;
  report.check = name;
  report.params = params;
  report.fitted = fit.slope;
  report.target = target_slope;
  report.statistic = std::abs(fit.slope - target_slope);
  report.threshold = kSlopeCheckTolerance;
  report.pass = report.statistic <= report.threshold;
  report.samples = trials;
  return report;
}

}  // namespace

DistributionCheckReport check_small_eigenvalue_count(
    std::size_t m, std::size_t n, std::size_t s,
    const std::vector<double>& rho_list, std::uint64_t trials,
    std::uint64_t seed, const RunOptions& opt) {
  if (n < 1 || m < n) {
    throw ConfigError("check_small_eigenvalue_count: need m >= n >= 1");
  }
  if (s < 1 || s > n) {
    throw ConfigError("check_small_eigenvalue_count: need 1 <= s <= n");
  }
  const double exponent =
      static_cast<double>(s * s) + static_cast<double>((m - n) * s);
  if (exponent > 3.0) {
    std::ostringstream msg;
    msg << "check_small_eigenvalue_count: exponent s^2+(M-N)s = " << exponent
        << " is Monte Carlo infeasible (> 3); use smaller s or M-N";
    throw ConfigError(msg.str());
  }
  std::ostringstream params;
  params << "m=" << m << " n=" << n << " s=" << s << " trials=" << trials;
  return slope_check(
      "small_eig_count", params.str(), rho_list, trials, seed, opt.workers,
      -exponent, [&](double rho, TrialStream& stream) {
        const ChannelRealization h = sample_channel(m, n, stream);
        const arma::vec lambda =
            detail::herm_eigvals(h.entries * h.entries.t());
        std::size_t below = 0;
        for (const double l : lambda) {
          if (l < 1.0 / rho) {
            ++below;
          }
        }
        return below == s;
      });
}

DistributionCheckReport check_lambda_min_tail(std::size_t m, std::size_t n,
                                              const std::vector<double>& rho_list,
                                              std::uint64_t trials,
                                              std::uint64_t seed,
                                              const RunOptions& opt) {
  if (n < 1 || m < n) {
    throw ConfigError("check_lambda_min_tail: need m >= n >= 1");
  }
  const double exponent = static_cast<double>(m - n) + 1.0;
  if (exponent > 3.0) {
    std::ostringstream msg;
    msg << "check_lambda_min_tail: exponent M-N+1 = " << exponent
        << " is Monte Carlo infeasible (> 3); use smaller M-N";
    throw ConfigError(msg.str());
  }
  std::ostringstream params;
  params << "m=" << m << " n=" << n << " trials=" << trials;
  return slope_check(
      "lambda_min_tail", params.str(), rho_list, trials, seed, opt.workers,
      -exponent, [&](double rho, TrialStream& stream) {
        const ChannelRealization h = sample_channel(m, n, stream);
        const arma::vec lambda =
            detail::herm_eigvals(h.entries * h.entries.t());
        return lambda(lambda.n_elem - 1) <= 1.0 / rho;
      });
}

DistributionCheckReport check_inverse_diag_chisquare(std::size_t m,
                                                     std::size_t n,
                                                     std::uint64_t trials,
                                                     std::uint64_t seed,
                                                     const RunOptions& opt,
                                                     std::size_t row) {
  if (n < 1 || m < n) {
    throw ConfigError("check_inverse_diag_chisquare: need m >= n >= 1");
  }
  if (trials < 100000) {
    throw ConfigError("check_inverse_diag_chisquare: trials must be >= 1e5");
  }
  if (row >= n) {
    throw ConfigError("check_inverse_diag_chisquare: row index out of range");
  }
  const unsigned shape = static_cast<unsigned>(m - n) + 1;
  std::vector<double> z = collect_samples(
      trials, derive_seed(seed, opt.point_index), opt.workers,
      [&](TrialStream& stream) {
        const ChannelRealization h = sample_channel(m, n, stream);
        const arma::vec diag =
            detail::inverse_diagonal(h.entries * h.entries.t(), false);
        return 1.0 / diag(row);
      });
  DistributionCheckReport report;
  report.check = "inverse_diag_chisquare";
  std::ostringstream params;
  params << "m=" << m << " n=" << n << " row=" << row << " trials=" << trials
         << " gamma_shape=" << shape;
  report.params = params.str();
  report.statistic = ks_statistic(
      std::move(z), [shape](double v) { return gamma_cdf_int(shape, v); });
  report.threshold = ks_critical_1pct(trials);
  report.pass = report.statistic <= report.threshold;
  report.samples = trials;
  return report;
}

DistributionCheckReport check_unitary_entry_density(std::size_t n,
                                                    std::uint64_t trials,
                                                    std::uint64_t seed,
                                                    const RunOptions& opt,
                                                    std::size_t row) {
  if (n < 2) {
    throw ConfigError("check_unitary_entry_density: n must be >= 2");
  }
  if (row >= n) {
    throw ConfigError("check_unitary_entry_density: row index out of range");
  }
  std::vector<double> q = collect_samples(
      trials, derive_seed(seed, opt.point_index), opt.workers,
      [&](TrialStream& stream) {
        const ChannelRealization h = sample_channel(n, n, stream);
        const EigenSpectrum s = detail::gram_spectrum(h.entries);
        return std::norm(s.basis(row, 0));
      });
  DistributionCheckReport report;
  report.check = "unitary_entry_density";
  std::ostringstream params;
  params << "n=" << n << " row=" << row << " trials=" << trials;
  report.params = params.str();
  const double power = static_cast<double>(n) - 1.0;
  report.statistic = ks_statistic(std::move(q), [power](double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - v, power);
  });
  report.threshold = ks_critical_1pct(trials);
  report.pass = report.statistic <= report.threshold;
  report.samples = trials;
  return report;
}

}  // namespace mimolab
