#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nbmc/distributions.hpp"
#include "support/stat_test.hpp"

using namespace nbmc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Product-form binomial coefficient, exact in double for small integer inputs.
double binom_exact(double a, long k) {
  double v = 1.0;
  for (long i = 0; i < k; ++i) {
    v *= (a - static_cast<double>(i)) / static_cast<double>(k - i);
  }
  return v;
}
}  // namespace

TEST_CASE("log_binom_coeff on integer and real arguments") {
  CHECK(log_binom_coeff(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(log_binom_coeff(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  // C(2.5, 2) = (2.5 * 1.5) / 2! = 1.875 by the product form.
  CHECK(log_binom_coeff(2.5, 2) ==
        doctest::Approx(std::log(binom_exact(2.5, 2))).epsilon(1e-13));
  CHECK(binom_exact(2.5, 2) == doctest::Approx(1.875).epsilon(1e-15));
  CHECK_THROWS_AS(log_binom_coeff(4, -1), std::domain_error);
  CHECK_THROWS_AS(log_binom_coeff(1.0, 3), std::domain_error);  // a - k <= -1
}

TEST_CASE("nb_log_pmf basics") {
  CHECK(nb_log_pmf(0, 2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::exp(nb_log_pmf(1, 1.0, 0.5)) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nb_log_pmf(3, 2.0, 0.0) == -kInf);
  CHECK_THROWS_AS(nb_log_pmf(0, -1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(nb_log_pmf(0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(nb_log_pmf(0, 1.0, -0.1), std::domain_error);
}

TEST_CASE("nb_log_pmf sums to one (brute-force tail)") {
  const double r = 5.0, q = 0.7;
  double sum = 0.0;
  for (long x = 0; x <= 400; ++x) {
    sum += std::exp(nb_log_pmf(x, r, q));
  }
  CHECK(sum >= 1.0 - 1e-12);
  CHECK(sum <= 1.0 + 1e-12);
}

TEST_CASE("nb_log_pmf with integer r matches the exact product form") {
  const double q = 0.4;
  for (long r : {1L, 2L, 5L}) {
    for (long x = 0; x <= 60; ++x) {
      const double exact = binom_exact(static_cast<double>(x + r - 1), x) *
                           std::pow(q, static_cast<double>(x)) *
                           std::pow(1.0 - q, static_cast<double>(r));
      CHECK(std::exp(nb_log_pmf(x, static_cast<double>(r), q)) ==
            doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("binom_log_pmf basics and conventions") {
  CHECK(binom_log_pmf(0, 0, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::exp(binom_log_pmf(1, 2, 0.5)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(binom_log_pmf(2, 2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(binom_log_pmf(0, 3, 1.0) == -kInf);
  CHECK(binom_log_pmf(0, 3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(binom_log_pmf(3, 2, 0.5), std::domain_error);
  CHECK_THROWS_AS(binom_log_pmf(0, 2, 1.5), std::domain_error);

  // Sums to one across the support.
  double sum = 0.0;
  for (long y = 0; y <= 17; ++y) sum += std::exp(binom_log_pmf(y, 17, 0.37));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("log_sum_exp stability and edge cases") {
  const std::vector<double> halves{std::log(0.5), std::log(0.5)};
  CHECK(log_sum_exp(halves) == doctest::Approx(0.0).epsilon(1e-14));

  const std::vector<double> with_inf{-kInf, std::log(0.25)};
  CHECK(log_sum_exp(with_inf) == doctest::Approx(std::log(0.25)).epsilon(1e-14));

  const std::vector<double> deep{-1000.0, -1000.0};
  CHECK(log_sum_exp(deep) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-14));

  const std::vector<double> all_inf{-kInf, -kInf};
  CHECK(log_sum_exp(all_inf) == -kInf);

  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("nb_sample moments and goodness of fit") {
  RandomStream rng(20240501);
  const double r = 2.0, q = 0.5;
  const int n = 100000;
  const long cap = 30;
  std::vector<std::int64_t> observed(cap + 2, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const long x = nb_sample(rng, r, q);
    sum += static_cast<double>(x);
    ++observed[std::min(x, cap + 1)];
  }
  const double mean = sum / n;
  const double sd = std::sqrt(r * q) / (1.0 - q);  // sqrt(r q)/(1-q)
  CHECK(std::fabs(mean - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

  std::vector<double> expected(cap + 2, 0.0);
  double head = 0.0;
  for (long x = 0; x <= cap; ++x) {
    expected[x] = n * std::exp(nb_log_pmf(x, r, q));
    head += expected[x];
  }
  expected[cap + 1] = n - head;
  CHECK(testsupport::chi_square_gof_pvalue(observed, expected) > 0.001);
}

TEST_CASE("nb_sample degenerate and invalid inputs") {
  RandomStream rng(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(nb_sample(rng, 1.0, 0.0) == 0);
  }
  CHECK_THROWS_AS(nb_sample(rng, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(nb_sample(rng, 1.0, 1.0), std::domain_error);
}

TEST_CASE("binom_sample moments and goodness of fit") {
  RandomStream rng(99);
  const long n_trials = 10;
  const double th = 0.3;
  const int n = 100000;
  std::vector<std::int64_t> observed(n_trials + 1, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const long y = binom_sample(rng, n_trials, th);
    REQUIRE(y >= 0);
    REQUIRE(y <= n_trials);
    sum += static_cast<double>(y);
    ++observed[y];
  }
  const double mean = sum / n;
  const double sd = std::sqrt(n_trials * th * (1.0 - th));
  CHECK(std::fabs(mean - 3.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

  std::vector<double> expected(n_trials + 1, 0.0);
  for (long y = 0; y <= n_trials; ++y) {
    expected[y] = n * std::exp(binom_log_pmf(y, n_trials, th));
  }
  CHECK(testsupport::chi_square_gof_pvalue(observed, expected) > 0.001);
}

TEST_CASE("binom_sample endpoints") {
  RandomStream rng(3);
  CHECK(binom_sample(rng, 0, 0.7) == 0);
  CHECK(binom_sample(rng, 5, 1.0) == 5);
  CHECK(binom_sample(rng, 5, 0.0) == 0);
}

TEST_CASE("same seed gives bit-identical sample streams") {
  RandomStream a(123456), b(123456);
  for (int i = 0; i < 2000; ++i) {
    CHECK(nb_sample(a, 2.5, 0.6) == nb_sample(b, 2.5, 0.6));
    CHECK(binom_sample(a, 12, 0.4) == binom_sample(b, 12, 0.4));
  }
}

TEST_CASE("substreams are decorrelated") {
  RandomStream a = RandomStream::substream(42, 0);
  RandomStream b = RandomStream::substream(42, 1);
  const int n = 1000;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = a.uniform01();
    ys[i] = b.uniform01();
  }
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
  }
  const double corr = (n * sxy - sx * sy) /
                      std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(std::fabs(corr) < 0.1);
}

TEST_CASE("gamma and poisson building blocks") {
  RandomStream rng(2718);
  const int n = 100000;

  double gsum = 0.0;
  for (int i = 0; i < n; ++i) gsum += gamma_sample(rng, 0.7, 2.0);
  // Gamma(0.7, 2) mean 1.4, var 2.8.
  CHECK(std::fabs(gsum / n - 1.4) < 3.0 * std::sqrt(2.8 / n));

  double psum = 0.0;
  for (int i = 0; i < n; ++i) psum += static_cast<double>(poisson_sample(rng, 8.5));
  CHECK(std::fabs(psum / n - 8.5) < 3.0 * std::sqrt(8.5 / n));

  // Large-mean path (chunked) stays exact in expectation.
  double big = 0.0;
  for (int i = 0; i < 2000; ++i) big += static_cast<double>(poisson_sample(rng, 1200.0));
  CHECK(std::fabs(big / 2000 - 1200.0) < 3.0 * std::sqrt(1200.0 / 2000));
}
