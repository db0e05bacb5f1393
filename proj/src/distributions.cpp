#include "nbmc/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nbmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// k * logv with the 0 * log(0) = 0 convention (logv may be -inf).
double xlog(long k, double logv) { return k == 0 ? 0.0 : k * logv; }

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " +
                            std::to_string(p));
  }
}

}  // namespace

double log_binom_coeff(double a, long k) {
  if (k < 0) {
    throw std::domain_error("log_binom_coeff: k must be >= 0");
  }
  if (!(a - k > -1.0)) {
    throw std::domain_error("log_binom_coeff: requires a - k > -1");
  }
  return std::lgamma(a + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(a - k + 1.0);
}

LogProb nb_log_pmf(long x, double r, Prob q) {
  if (!(r > 0.0)) {
    throw std::domain_error("nb_log_pmf: r must be > 0");
  }
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::domain_error("nb_log_pmf: q must lie in [0,1)");
  }
  if (x < 0) {
    return kNegInf;
  }
  return log_binom_coeff(x + r - 1.0, x) + xlog(x, std::log(q)) +
         r * std::log1p(-q);
}

LogProb binom_log_pmf(long y, long n, Prob theta) {
  check_prob(theta, "theta");
  if (n < 0) {
    throw std::domain_error("binom_log_pmf: n must be >= 0");
  }
  if (y > n || y < 0) {
    throw std::domain_error("binom_log_pmf: requires 0 <= y <= n");
  }
  return log_binom_coeff(static_cast<double>(n), y) +
         xlog(y, std::log(theta)) + xlog(n - y, std::log1p(-theta));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  double mx = kNegInf;
  for (double v : values) {
    if (v > mx) mx = v;
  }
  if (mx == kNegInf) {
    return kNegInf;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - mx);
  }
  return mx + std::log(acc);
}

double gamma_sample(RandomStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale >= 0.0)) {
    throw std::domain_error("gamma_sample: requires shape > 0 and scale >= 0");
  }
  if (scale == 0.0) {
    return 0.0;
  }
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^(1/a).
    const double g = gamma_sample(rng, shape + 1.0, 1.0);
    return scale * g * std::pow(rng.uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return scale * d * v;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return scale * d * v;
    }
  }
}

long poisson_sample(RandomStream& rng, double mean) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("poisson_sample: mean must be >= 0");
  }
  long total = 0;
  // Poisson(a + b) = Poisson(a) + Poisson(b): peel off chunks so the
  // exp(-mean) threshold below never underflows.
  constexpr double kChunk = 500.0;
  while (mean > kChunk) {
    mean -= kChunk;
    const double limit = std::exp(-kChunk);
    double prod = rng.uniform_pos();
    while (prod > limit) {
      ++total;
      prod *= rng.uniform_pos();
    }
  }
  const double limit = std::exp(-mean);
  double prod = rng.uniform_pos();
  while (prod > limit) {
    ++total;
    prod *= rng.uniform_pos();
  }
  return total;
}

long nb_sample(RandomStream& rng, double r, Prob q) {
  if (!(r > 0.0)) {
    throw std::domain_error("nb_sample: r must be > 0");
  }
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::domain_error("nb_sample: q must lie in [0,1)");
  }
  if (q == 0.0) {
    return 0;
  }
  const double g = gamma_sample(rng, r, q / (1.0 - q));
  return poisson_sample(rng, g);
}

long binom_sample(RandomStream& rng, long n, Prob theta) {
  check_prob(theta, "theta");
  if (n < 0) {
    throw std::domain_error("binom_sample: n must be >= 0");
  }
  if (n == 0 || theta == 0.0) {
    return 0;
  }
  if (theta == 1.0) {
    return n;
  }
  double pmf = std::exp(n * std::log1p(-theta));  // P(X = 0)
  if (pmf == 0.0) {
    // Underflowed start of the CDF walk; count Bernoulli marks instead.
    long k = 0;
    for (long i = 0; i < n; ++i) {
      if (rng.uniform01() < theta) ++k;
    }
    return k;
  }
  const double u = rng.uniform01();
  const double odds = theta / (1.0 - theta);
  double cdf = pmf;
  long k = 0;
  while (u >= cdf && k < n) {
    pmf *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
    cdf += pmf;
    ++k;
  }
  return k;
}

}  // namespace nbmc
