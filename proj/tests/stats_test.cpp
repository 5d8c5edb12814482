#include "mimolab/stats.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "mimolab/errors.hpp"

using namespace mimolab;

namespace {

// Simpson quadrature of the Gamma(shape, 1) density on [0, x]; independent
// oracle for the closed-form CDF.
double gamma_cdf_quadrature(unsigned shape, double x) {
  const int steps = 4000;
  const double h = x / steps;
  double fact = 1.0;
  for (unsigned j = 2; j < shape; ++j) fact *= j;
  auto pdf = [&](double t) {
    return std::pow(t, shape - 1.0) * std::exp(-t) / fact;
  };
  double sum = pdf(0.0) + pdf(x);
  for (int i = 1; i < steps; ++i) {
    sum += pdf(i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("wilson interval basics") {
  const WilsonInterval ci = wilson_interval(10, 100);
  CHECK(ci.low == doctest::Approx(0.05522914).epsilon(1e-4));
  CHECK(ci.high == doctest::Approx(0.17436566).epsilon(1e-4));
  CHECK(ci.low < 0.1);
  CHECK(ci.high > 0.1);

  const WilsonInterval zero = wilson_interval(0, 1000);
  CHECK(zero.low == 0.0);
  CHECK(zero.high > 0.0);
  const WilsonInterval one = wilson_interval(1000, 1000);
  CHECK(one.high == 1.0);
  CHECK(one.low < 1.0);

  CHECK_THROWS_AS(wilson_interval(1, 0), DomainError);
  CHECK_THROWS_AS(wilson_interval(5, 4), DomainError);
}

TEST_CASE("wilson interval ordering p_hat inside") {
  for (std::uint64_t k : {0ULL, 3ULL, 77ULL, 500ULL, 999ULL, 1000ULL}) {
    const WilsonInterval ci = wilson_interval(k, 1000);
    const double p = k / 1000.0;
    CHECK(ci.low <= p + 1e-15);
    CHECK(ci.high >= p - 1e-15);
    CHECK(ci.low >= 0.0);
    CHECK(ci.high <= 1.0);
  }
}

TEST_CASE("fit_line recovers an exact line") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 - 2.0 * v);
  const LineFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.slope_stderr == doctest::Approx(0.0));
}

TEST_CASE("fit_line stderr grows with scatter") {
  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y{1.1, 1.9, 3.2, 3.8, 5.3, 5.7};
  const LineFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.slope_stderr > 0.0);
  CHECK_THROWS_AS(fit_line({1.0}, {1.0}), InsufficientDataError);
  CHECK_THROWS_AS(fit_line({1.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(fit_line({1.0, 2.0}, {1.0}), DomainError);
}

TEST_CASE("ks statistic hand value") {
  auto uniform = [](double v) { return v; };
  const double d = ks_statistic({0.75, 0.25, 0.5}, uniform);
  CHECK(d == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(ks_statistic({}, uniform), DomainError);
}

TEST_CASE("ks critical value scale") {
  CHECK(ks_critical_1pct(10000) == doctest::Approx(0.016276).epsilon(1e-3));
}

TEST_CASE("gamma cdf closed form vs quadrature") {
  CHECK(gamma_cdf_int(1, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(gamma_cdf_int(2, 2.0) ==
        doctest::Approx(1.0 - std::exp(-2.0) * 3.0).epsilon(1e-12));
  for (unsigned shape : {1u, 2u, 3u, 5u}) {
    for (double x : {0.3, 1.0, 2.7, 6.0}) {
      CHECK(gamma_cdf_int(shape, x) ==
            doctest::Approx(gamma_cdf_quadrature(shape, x)).epsilon(1e-8));
    }
  }
  CHECK(gamma_cdf_int(3, 0.0) == 0.0);
  CHECK(gamma_cdf_int(3, -1.0) == 0.0);
  CHECK_THROWS_AS(gamma_cdf_int(0, 1.0), DomainError);
}

TEST_CASE("q function anchors") {
  CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q_function(kZ95) == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(q_function(-kZ95) == doctest::Approx(0.975).epsilon(1e-6));
}
