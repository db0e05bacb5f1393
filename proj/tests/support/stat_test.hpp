// Small statistical helpers for the test suites: regularized incomplete
// gamma, chi-square survival, and a goodness-of-fit driver with automatic
// bin merging. Kept independent of the library's pmf code paths.
#ifndef NBMC_TESTS_STAT_TEST_HPP
#define NBMC_TESTS_STAT_TEST_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (x >= a+1),
// modified Lentz.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

// P[chi2_df > stat]
inline double chi2_survival(double df, double stat) {
  return gamma_q(0.5 * df, 0.5 * stat);
}

// Chi-square goodness-of-fit p-value. observed[i] counts draws in bin i;
// expected[i] are model counts on the same bins (they need not sum to the
// sample size exactly; the remainder is treated as an overflow bin). Bins
// with expected count below min_expected are pooled left-to-right.
inline double chi_square_gof_pvalue(const std::vector<std::int64_t>& observed,
                                    const std::vector<double>& expected,
                                    double min_expected = 5.0) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_gof_pvalue: size mismatch");
  }
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (!exp_m.empty()) {
      obs_m.back() += o_acc;
      exp_m.back() += e_acc;
    } else {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
    }
  }
  if (obs_m.size() < 2) {
    throw std::invalid_argument("chi_square_gof_pvalue: too few usable bins");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs_m.size(); ++i) {
    const double d = obs_m[i] - exp_m[i];
    stat += d * d / exp_m[i];
  }
  return chi2_survival(static_cast<double>(obs_m.size() - 1), stat);
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

inline MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

}  // namespace testsupport

#endif  // NBMC_TESTS_STAT_TEST_HPP
