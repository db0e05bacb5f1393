#include "nbmc/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "nbmc/optim.hpp"

namespace nbmc {

namespace {

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

// Unconstrained search space: (log r, logit q, log c).
Eigen::Vector3d to_unconstrained(const ModelParams& p) {
  return {std::log(p.r), std::log(p.q / (1.0 - p.q)), std::log(p.c)};
}

ModelParams from_unconstrained(const Eigen::Vector3d& v) {
  const double r = std::clamp(std::exp(v[0]), 1e-8, 1e8);
  const double q = std::clamp(1.0 / (1.0 + std::exp(-v[1])), 1e-12, 1.0 - 1e-12);
  const double c = std::clamp(std::exp(v[2]), 1e-10, 1e10);
  return ModelParams(r, q, c);
}

bool constant_counts(const TimeSeries& series) {
  for (Eigen::Index i = 1; i < series.size(); ++i) {
    if (series.counts[i] != series.counts[0]) return false;
  }
  return true;
}

// Latin-hypercube start points over the box, log-spaced in r and c.
std::vector<ModelParams> lhs_starts(const StartBox& box, int n, std::uint64_t seed) {
  RandomStream rng(seed);
  const auto stratified = [&](double lo, double hi, bool log_scale) {
    std::vector<double> vals(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[i], perm[j]);
    }
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    for (int i = 0; i < n; ++i) {
      const double u = (perm[i] + rng.uniform01()) / n;
      const double v = a + u * (b - a);
      vals[i] = log_scale ? std::exp(v) : v;
    }
    return vals;
  };
  const auto rs = stratified(box.r_lo, box.r_hi, true);
  const auto qs = stratified(box.q_lo, box.q_hi, false);
  const auto cs = stratified(box.c_lo, box.c_hi, true);
  std::vector<ModelParams> starts;
  starts.reserve(n);
  for (int i = 0; i < n; ++i) {
    starts.emplace_back(rs[i], qs[i], cs[i]);
  }
  return starts;
}

void check_series_for_fit(const TimeSeries& series, const FitOptions& options) {
  if (series.size() < 2) {
    throw std::invalid_argument("fit_mle: need at least 2 observations");
  }
  if (series.size() < options.min_obs) {
    throw std::invalid_argument("fit_mle: need at least " +
                                std::to_string(options.min_obs) + " observations, got " +
                                std::to_string(series.size()));
  }
}

FitResult run_starts(const TimeSeries& series, const std::vector<ModelParams>& starts,
                     const FitOptions& options) {
  const auto objective = [&](const Eigen::VectorXd& v) {
    const double ll =
        log_likelihood(from_unconstrained(v), series, options.include_initial);
    return std::isfinite(ll) ? -ll : 1e300;
  };

  NelderMeadOptions nm;
  nm.max_iters = options.max_iters;
  nm.f_tol = options.f_tol;
  nm.x_tol = options.x_tol;

  NelderMeadResult best;
  long best_start_evals = 0;
  int best_index = -1;
  long total_evals = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    NelderMeadResult run = nelder_mead(objective, to_unconstrained(starts[s]), nm);
    total_evals += run.n_evals;
    const bool better =
        best_index < 0 || run.f < best.f ||
        (run.f == best.f && run.n_evals < best_start_evals);
    if (better) {
      best_start_evals = run.n_evals;
      best = std::move(run);
      best_index = static_cast<int>(s);
    }
  }

  FitResult out{from_unconstrained(best.x), -best.f, best.converged,
                total_evals, best_index, constant_counts(series), {}};
  out.objective_trace.reserve(best.trace.size());
  for (double v : best.trace) {
    out.objective_trace.push_back(-v);
  }
  return out;
}

void parallel_for(int n_jobs, const std::function<void(int)>& body) {
  const int n_threads =
      std::max(1, std::min<int>(n_jobs, std::thread::hardware_concurrency()));
  if (n_threads == 1) {
    for (int i = 0; i < n_jobs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double log_likelihood(const ModelParams& params, const TimeSeries& series,
                      bool include_initial) {
  if (series.size() < 2) {
    throw std::invalid_argument("log_likelihood: need at least 2 observations");
  }
  const TransitionKernel kernel(params);
  double ll = include_initial ? stationary_log_pmf(params, series.counts[0]) : 0.0;
  for (Eigen::Index i = 1; i < series.size(); ++i) {
    const double dt = series.times[i] - series.times[i - 1];
    if (!(dt > 0.0)) {
      throw std::invalid_argument("log_likelihood: times not strictly increasing");
    }
    ll += kernel.log_pmf(dt, series.counts[i - 1], series.counts[i]);
  }
  return ll;
}

FitResult fit_mle(const TimeSeries& series, const FitOptions& options) {
  check_series_for_fit(series, options);
  if (options.n_starts < 1) {
    throw std::invalid_argument("fit_mle: n_starts must be >= 1");
  }
  return run_starts(series, lhs_starts(options.start_box, options.n_starts, options.seed),
                    options);
}

FitResult fit_mle_from(const TimeSeries& series, const ModelParams& start,
                       const FitOptions& options) {
  check_series_for_fit(series, options);
  return run_starts(series, {start}, options);
}

StudySummary run_simulation_study(std::uint64_t master_seed,
                                  const ModelParams& true_params,
                                  const SampleSchedule& schedule, int n_rep,
                                  const std::vector<Eigen::Index>& subsample_sizes,
                                  const FitOptions& options) {
  if (n_rep < 1) {
    throw std::invalid_argument("run_simulation_study: n_rep must be >= 1");
  }
  const Eigen::Index full = schedule_length(schedule);
  for (Eigen::Index size : subsample_sizes) {
    if (size > full) {
      throw std::invalid_argument("run_simulation_study: subsample size " +
                                  std::to_string(size) + " exceeds schedule length " +
                                  std::to_string(full));
    }
  }
  const std::vector<TimeSeries> datasets =
      replicate_datasets(master_seed, true_params, schedule, n_rep);

  StudySummary summary{true_params, {}, {}};
  summary.estimates.assign(subsample_sizes.size(),
                           std::vector<std::array<double, 3>>(
                               n_rep, {kQuietNan, kQuietNan, kQuietNan}));

  parallel_for(n_rep, [&](int rep) {
    for (std::size_t si = 0; si < subsample_sizes.size(); ++si) {
      const FitResult fit = fit_mle(datasets[rep].head(subsample_sizes[si]), options);
      if (fit.converged) {
        summary.estimates[si][rep] = {fit.params_hat.r, fit.params_hat.q,
                                      fit.params_hat.c};
      }
    }
  });

  for (std::size_t si = 0; si < subsample_sizes.size(); ++si) {
    StudyRow row;
    row.size = subsample_sizes[si];
    Eigen::Array3d sum = Eigen::Array3d::Zero();
    Eigen::Array3d sum_sq = Eigen::Array3d::Zero();
    for (const auto& est : summary.estimates[si]) {
      if (std::isnan(est[0])) {
        ++row.n_failed;
        continue;
      }
      ++row.n_used;
      const Eigen::Array3d e{est[0], est[1], est[2]};
      sum += e;
      sum_sq += e * e;
    }
    if (row.n_used > 0) {
      const Eigen::Array3d mean = sum / row.n_used;
      Eigen::Array3d sd = Eigen::Array3d::Zero();
      if (row.n_used > 1) {
        sd = ((sum_sq - row.n_used * mean * mean) / (row.n_used - 1)).max(0.0).sqrt();
      }
      row.mean_r = mean[0]; row.sd_r = sd[0];
      row.mean_q = mean[1]; row.sd_q = sd[1];
      row.mean_c = mean[2]; row.sd_c = sd[2];
    }
    summary.rows.push_back(row);
  }
  return summary;
}

}  // namespace nbmc
