#ifndef NBMC_INFERENCE_HPP
#define NBMC_INFERENCE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "nbmc/process.hpp"
#include "nbmc/simulate.hpp"
#include "nbmc/time_series.hpp"

namespace nbmc {

/// Start-point box for the multi-start search, in natural parameter space.
struct StartBox {
  double r_lo = 0.2, r_hi = 20.0;
  double q_lo = 0.05, q_hi = 0.95;
  double c_lo = 0.05, c_hi = 5.0;
};

struct FitOptions {
  bool include_initial = true;  // add the stationary log-density of x_0
  int n_starts = 5;
  int max_iters = 2000;
  double f_tol = 1e-8;
  double x_tol = 1e-8;
  StartBox start_box{};
  Eigen::Index min_obs = 10;    // floor on the series length
  std::uint64_t seed = 0x6e626d63;  // jitters the Latin-hypercube starts
};

struct FitResult {
  ModelParams params_hat;
  double loglik = 0.0;
  bool converged = false;
  long n_evals = 0;
  int start_used = 0;
  bool degenerate_data = false;       // constant counts: best-effort fit
  std::vector<double> objective_trace;  // best loglik per iteration, non-decreasing
};

/// Exact log-likelihood: sum of transition log pmfs over consecutive
/// observations, plus the stationary log pmf of the first one when
/// include_initial. The finite-mixture transition is exact, so no
/// truncation error enters.
double log_likelihood(const ModelParams& params, const TimeSeries& series,
                      bool include_initial);

/// Maximum-likelihood fit of (r, q, c) by multi-start Nelder-Mead over the
/// unconstrained (log r, logit q, log c) space. Non-convergence is reported
/// through converged = false, never silently.
FitResult fit_mle(const TimeSeries& series, const FitOptions& options = {});

/// Continuation fit from a known-good starting point (single simplex run);
/// used for warm restarts in expanding-window loops.
FitResult fit_mle_from(const TimeSeries& series, const ModelParams& start,
                       const FitOptions& options = {});

struct StudyRow {
  Eigen::Index size = 0;
  double mean_r = 0, sd_r = 0;
  double mean_q = 0, sd_q = 0;
  double mean_c = 0, sd_c = 0;
  int n_used = 0;
  int n_failed = 0;  // non-convergent replicates, excluded from the moments
};

struct StudySummary {
  ModelParams true_params;
  std::vector<StudyRow> rows;  // one per requested subsample size
  // estimates[size_index][replicate] = (r_hat, q_hat, c_hat); NaN if failed.
  std::vector<std::vector<std::array<double, 3>>> estimates;
};

/// Replicate estimation study: n_rep datasets from the schedule, fitted on
/// each requested prefix size; reports mean and sd of the estimates.
/// Replicates run concurrently; deterministic in master_seed.
StudySummary run_simulation_study(std::uint64_t master_seed,
                                  const ModelParams& true_params,
                                  const SampleSchedule& schedule, int n_rep,
                                  const std::vector<Eigen::Index>& subsample_sizes,
                                  const FitOptions& options = {});

}  // namespace nbmc

#endif  // NBMC_INFERENCE_HPP
