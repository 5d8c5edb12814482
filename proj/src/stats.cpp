#include "mimolab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mimolab/errors.hpp"

namespace mimolab {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z) {
  if (trials == 0) {
    throw DomainError("wilson_interval: trials must be >= 1");
  }
  if (successes > trials) {
    throw DomainError("wilson_interval: successes exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval ci{(center - spread) / denom, (center + spread) / denom};
  ci.low = successes == 0 ? 0.0 : std::max(0.0, ci.low);
  ci.high = successes == trials ? 1.0 : std::min(1.0, ci.high);
  return ci;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw DomainError("fit_line: x and y sizes differ");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw InsufficientDataError("fit_line: need at least 2 points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    throw DomainError("fit_line: degenerate abscissae (all x equal)");
  }
  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.slope_stderr = (n > 2) ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw DomainError("ks_statistic: empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = f - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - f;
    d = std::max(d, std::max(lo, hi));
  }
  return d;
}

double ks_critical_1pct(std::uint64_t samples) {
  // sqrt(-ln(alpha/2)/2) = 1.6276 for alpha = 0.01
  return 1.6276236115189502 / std::sqrt(static_cast<double>(samples));
}

double gamma_cdf_int(unsigned shape, double x) {
  if (shape == 0) {
    throw DomainError("gamma_cdf_int: shape must be >= 1");
  }
  if (x <= 0.0) {
    return 0.0;
  }
  // 1 - e^{-x} sum_{j<k} x^j/j!, evaluated with a running term
  double term = 1.0;
  double sum = 1.0;
  for (unsigned j = 1; j < shape; ++j) {
    term *= x / static_cast<double>(j);
    sum += term;
  }
  const double tail = std::exp(-x) * sum;
  return tail >= 1.0 ? 0.0 : 1.0 - tail;
}

double q_function(double x) {
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

}  // namespace mimolab
