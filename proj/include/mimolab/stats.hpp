#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mimolab {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double low;
  double high;
};

// Wilson score interval for a binomial proportion. Preferred over Wald here
// because the operating regime has proportions down to 1e-5 and below.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = kZ95);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// One-sample Kolmogorov-Smirnov distance against an analytic CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic one-sample KS critical value at the 1% level.
double ks_critical_1pct(std::uint64_t samples);

// Lower regularized incomplete gamma P(shape, x) for integer shape >= 1,
// i.e. the CDF of Gamma(shape, scale = 1).
double gamma_cdf_int(unsigned shape, double x);

// Gaussian tail probability Q(x).
double q_function(double x);

}  // namespace mimolab
