#include <doctest.h>

#include <chrono>
#include <cmath>
#include <vector>

#include "nbmc/simulate.hpp"
#include "support/stat_test.hpp"

using namespace nbmc;

TEST_CASE("schedule_times shapes and validation") {
  RandomStream rng(1);
  const Eigen::ArrayXd eq = schedule_times(rng, EqualSpacing{0.5, 4});
  REQUIRE(eq.size() == 4);
  CHECK(eq[0] == 0.0);
  CHECK(eq[3] == doctest::Approx(1.5).epsilon(1e-15));

  const Eigen::ArrayXd ex = schedule_times(rng, ExponentialArrivals{0.5, 2000});
  REQUIRE(ex.size() == 2000);
  CHECK(ex[0] == 0.0);
  double gap_sum = 0.0;
  for (Eigen::Index i = 1; i < ex.size(); ++i) {
    CHECK(ex[i] > ex[i - 1]);
    gap_sum += ex[i] - ex[i - 1];
  }
  const double gap_mean = gap_sum / (ex.size() - 1);
  CHECK(std::fabs(gap_mean - 2.0) < 3.0 * 2.0 / std::sqrt(1999.0));

  const Eigen::ArrayXd xp =
      schedule_times(rng, ExplicitTimes{{0.0, 0.5, 2.0}});
  CHECK(xp[2] == 2.0);

  CHECK_THROWS_AS(schedule_times(rng, EqualSpacing{0.0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(schedule_times(rng, EqualSpacing{1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(schedule_times(rng, ExponentialArrivals{-1.0, 5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(schedule_times(rng, ExplicitTimes{{0.0, 1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(schedule_times(rng, ExplicitTimes{{-1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(schedule_times(rng, ExplicitTimes{{}}), std::invalid_argument);
}

TEST_CASE("draw_stationary matches the stationary law") {
  RandomStream rng(314159);
  const ModelParams p(2.0, 0.5, 0.5);
  const int n = 100000;
  const long cap = 30;
  std::vector<std::int64_t> observed(cap + 2, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const long x = draw_stationary(rng, p);
    sum += static_cast<double>(x);
    ++observed[std::min(x, cap + 1)];
  }
  const double sd = std::sqrt(p.r * p.q) / (1.0 - p.q);
  CHECK(std::fabs(sum / n - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

  std::vector<double> expected(cap + 2, 0.0);
  double head = 0.0;
  for (long x = 0; x <= cap; ++x) {
    expected[x] = n * std::exp(stationary_log_pmf(p, x));
    head += expected[x];
  }
  expected[cap + 1] = n - head;
  CHECK(testsupport::chi_square_gof_pvalue(observed, expected) > 0.001);
}

TEST_CASE("step matches the closed-form transition row") {
  RandomStream rng(271828);
  const ModelParams p(2.0, 0.5, 0.5);
  const long x0 = 3;
  const double dt = 1.0;
  const int n = 100000;

  const TransitionRow row = transition_row(p, dt, x0, 1e-12);
  const long support = row.probs.size();
  std::vector<std::int64_t> observed(support + 1, 0);
  for (int i = 0; i < n; ++i) {
    ++observed[std::min(step(rng, p, x0, dt), support)];
  }
  std::vector<double> expected(support + 1, 0.0);
  for (long j = 0; j < support; ++j) expected[j] = n * row.probs[j];
  expected[support] = n * row.truncation_mass;
  CHECK(testsupport::chi_square_gof_pvalue(observed, expected) > 0.001);
}

TEST_CASE("step limits") {
  RandomStream rng(5);
  const ModelParams p(2.0, 0.5, 0.5);
  // dt -> 0 keeps the state with probability -> 1.
  int kept = 0;
  for (int i = 0; i < 1000; ++i) {
    kept += step(rng, p, 7, 1e-10) == 7;
  }
  CHECK(kept == 1000);
  CHECK_THROWS_AS(step(rng, p, 3, 0.0), std::domain_error);
  CHECK_THROWS_AS(step(rng, p, 3, -1.0), std::domain_error);

  // Huge dt forgets the state: compare moments to the stationary law.
  double sum = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(step(rng, p, 40, 800.0));
  const double sd = std::sqrt(p.r * p.q) / (1.0 - p.q);
  CHECK(std::fabs(sum / n - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("simulate_path stationary moments and autocorrelation") {
  RandomStream rng(112233);
  const ModelParams p(2.0, 0.5, 0.5);

  const TimeSeries one = simulate_path(rng, p, EqualSpacing{1.0, 1});
  CHECK(one.size() == 1);

  const TimeSeries path = simulate_path(rng, p, EqualSpacing{1.0, 10000});
  REQUIRE(path.size() == 10000);
  const double n = static_cast<double>(path.size());
  const double mean = path.counts.cast<double>().mean();
  const double var = p.r * p.q / ((1.0 - p.q) * (1.0 - p.q));
  const double rho = std::exp(-p.c);
  const double inflation = (1.0 + rho) / (1.0 - rho);
  const double se = std::sqrt(var / n * inflation);
  CHECK(std::fabs(mean - 2.0) < 3.0 * se);

  // Lag-1 autocorrelation of the skeleton is e^{-c}.
  const Eigen::ArrayXd x = path.counts.cast<double>();
  const Eigen::ArrayXd xc = x - x.mean();
  const double num = (xc.head(x.size() - 1) * xc.tail(x.size() - 1)).sum();
  const double den = xc.square().sum();
  CHECK(std::fabs(num / den - rho) < 0.05);

  // Shorter path: mean within the autocorrelation-adjusted band.
  const TimeSeries path2 = simulate_path(rng, p, EqualSpacing{1.0, 1000});
  const double se2 = std::sqrt(var / 1000.0 * inflation);
  CHECK(std::fabs(path2.counts.cast<double>().mean() - 2.0) < 3.0 * se2);
}

TEST_CASE("simulate_path honors x_init") {
  RandomStream rng(8);
  const ModelParams p(2.0, 0.5, 0.5);
  const TimeSeries path = simulate_path(rng, p, EqualSpacing{1.0, 5}, 17);
  CHECK(path.counts[0] == 17);
}

TEST_CASE("replicate_datasets determinism and independence") {
  const ModelParams p(2.0, 0.5, 0.5);
  const SampleSchedule sched = EqualSpacing{1.0, 1000};
  const auto a = replicate_datasets(4242, p, sched, 3);
  const auto b = replicate_datasets(4242, p, sched, 3);
  REQUIRE(a.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK((a[i].counts == b[i].counts).all());
    CHECK((a[i].times == b[i].times).all());
  }

  // Distinct replicates decorrelate.
  const Eigen::ArrayXd x = a[0].counts.cast<double>() - a[0].counts.cast<double>().mean();
  const Eigen::ArrayXd y = a[1].counts.cast<double>() - a[1].counts.cast<double>().mean();
  const double corr = (x * y).sum() / std::sqrt(x.square().sum() * y.square().sum());
  CHECK(std::fabs(corr) < 0.05);
}

TEST_CASE("replicate_datasets desk-scale budget") {
  const ModelParams p(2.0, 0.5, 0.5);
  const auto t0 = std::chrono::steady_clock::now();
  const auto reps = replicate_datasets(7, p, EqualSpacing{1.0, 1000}, 100);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(reps.size() == 100);
  CHECK(secs < 10.0);
}

TEST_CASE("marginal invariance across replicates") {
  // The count at a fixed index across replicate paths is NB(r, q).
  const ModelParams p(2.0, 0.5, 0.5);
  const auto reps = replicate_datasets(1357, p, EqualSpacing{1.0, 40}, 10000);
  const long cap = 25;
  std::vector<std::int64_t> observed(cap + 2, 0);
  for (const TimeSeries& ts : reps) {
    ++observed[std::min<long>(ts.counts[17], cap + 1)];
  }
  std::vector<double> expected(cap + 2, 0.0);
  double head = 0.0;
  for (long x = 0; x <= cap; ++x) {
    expected[x] = 10000 * std::exp(stationary_log_pmf(p, x));
    head += expected[x];
  }
  expected[cap + 1] = 10000 - head;
  CHECK(testsupport::chi_square_gof_pvalue(observed, expected) > 0.001);
}
