#include "nbmc/inversion.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "nbmc/simulate.hpp"

namespace nbmc {

namespace {

void check_query(const PgfQuery& query) {
  if (!(query.t > 0.0)) {
    throw std::domain_error("pgf query: t must be > 0");
  }
  if (query.x0 < 0) {
    throw std::domain_error("pgf query: x0 must be >= 0");
  }
  if (query.n_points < 8 || !std::has_single_bit(static_cast<unsigned>(query.n_points))) {
    throw std::domain_error("pgf query: n_points must be a power of two >= 8");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::complex<double> pgf_eval(const PgfQuery& query, std::complex<double> z) {
  check_query(query);
  if (std::abs(std::abs(z) - 1.0) > 1e-12) {
    throw std::domain_error("pgf_eval: z must lie on the unit circle");
  }
  const Prob th = theta(query.params, query.t);
  const double qt = query.params.q * (1.0 - th);
  const std::complex<double> one{1.0, 0.0};
  const std::complex<double> xi = (one - z) / (one - qt * z);
  const std::complex<double> base_r = (one - xi) / z;
  if (!(base_r.real() > 0.0)) {
    throw std::runtime_error(
        "pgf_eval: principal-branch base left the right half-plane (re = " +
        std::to_string(base_r.real()) + "); parameters outside the valid region");
  }
  return std::pow(base_r, query.params.r) *
         std::pow(one - th * xi, static_cast<double>(query.x0));
}

TransitionRow invert_transition_row(const PgfQuery& query) {
  check_query(query);
  const int m = query.n_points;
  std::vector<std::complex<double>> samples(m);
  for (int k = 0; k < m; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / m;
    samples[k] = pgf_eval(query, std::polar(1.0, ang));
  }
  // p_j = (1/m) sum_k G(z_k) z_k^{-j}: an unscaled forward DFT over k.
  std::vector<std::complex<double>> coeffs(m);
  Eigen::FFT<double> fft;
  fft.fwd(coeffs, samples);

  Eigen::ArrayXd probs(m);
  for (int j = 0; j < m; ++j) {
    probs[j] = std::max(0.0, coeffs[j].real() / m);
  }
  probs /= probs.sum();

  const int keep = m / 2;
  const double tail = probs.tail(m - keep).sum();
  if (tail > 1e-8) {
    throw std::runtime_error(
        "invert_transition_row: mass beyond n_points/2 is " + std::to_string(tail) +
        "; increase n_points");
  }
  TransitionRow row;
  row.x0 = query.x0;
  row.t = query.t;
  row.probs = probs.head(keep);
  row.truncation_mass = tail;
  return row;
}

int default_n_points(const ModelParams& params, double t, long x0) {
  const TransitionRow exact = transition_row(params, t, x0, 1e-10);
  const auto support = static_cast<unsigned long>(exact.probs.size());
  return static_cast<int>(std::bit_ceil(std::max(8UL, 4UL * support)));
}

BenchReport bench_compare(const std::vector<BenchCell>& grid, int repetitions) {
  if (grid.empty()) {
    throw std::invalid_argument("bench_compare: empty grid");
  }
  if (repetitions < 1) {
    throw std::invalid_argument("bench_compare: repetitions must be >= 1");
  }
  using clock = std::chrono::steady_clock;
  constexpr std::uint64_t kBenchSeed = 0xBE7C4;

  BenchReport report;
  report.repetitions = repetitions;
  for (std::size_t ci = 0; ci < grid.size(); ++ci) {
    const BenchCell& cell = grid[ci];
    RandomStream rng = RandomStream::substream(kBenchSeed, ci);
    const TimeSeries series =
        simulate_path(rng, cell.params, EqualSpacing{cell.dt, cell.n_obs});

    // Shared DFT length, sized for the widest row this series visits.
    const long max_count = series.counts.maxCoeff();
    const int n_points = default_n_points(cell.params, cell.dt, max_count);

    const auto exact_loglik = [&] {
      const TransitionKernel kernel(cell.params);
      double ll = 0.0;
      for (Eigen::Index i = 1; i < series.size(); ++i) {
        ll += kernel.log_pmf(cell.dt, series.counts[i - 1], series.counts[i]);
      }
      return ll;
    };
    const auto inversion_loglik = [&] {
      double ll = 0.0;
      for (Eigen::Index i = 1; i < series.size(); ++i) {
        const TransitionRow row = invert_transition_row(
            {cell.params, cell.dt, series.counts[i - 1], n_points});
        const long x1 = series.counts[i];
        const double p = x1 < row.probs.size() ? row.probs[x1] : 0.0;
        ll += std::log(std::max(p, 1e-300));
      }
      return ll;
    };

    std::vector<double> exact_times, inversion_times;
    for (int rep = 0; rep < repetitions; ++rep) {
      auto t0 = clock::now();
      volatile double sink = exact_loglik();
      auto t1 = clock::now();
      sink = inversion_loglik();
      (void)sink;
      auto t2 = clock::now();
      exact_times.push_back(std::chrono::duration<double>(t1 - t0).count());
      inversion_times.push_back(std::chrono::duration<double>(t2 - t1).count());
    }

    // Row-level discrepancy over the distinct origins the series visits.
    double max_diff = 0.0;
    const TransitionKernel kernel(cell.params);
    std::map<long, bool> seen;
    for (Eigen::Index i = 0; i + 1 < series.size(); ++i) {
      const long x0 = series.counts[i];
      if (seen.emplace(x0, true).second) {
        const TransitionRow inv =
            invert_transition_row({cell.params, cell.dt, x0, n_points});
        const TransitionRow exact = kernel.row(cell.dt, x0, 1e-12);
        for (Eigen::Index j = 0; j < exact.probs.size(); ++j) {
          const double p_inv = j < inv.probs.size() ? inv.probs[j] : 0.0;
          max_diff = std::max(max_diff, std::abs(exact.probs[j] - p_inv));
        }
      }
    }

    const double ex = median(exact_times);
    const double in = median(inversion_times);
    report.cells.push_back({cell, ex, in, in / ex, max_diff});
  }
  return report;
}

}  // namespace nbmc
