#ifndef NBMC_FORECAST_HPP
#define NBMC_FORECAST_HPP

#include <vector>

#include "nbmc/inference.hpp"
#include "nbmc/process.hpp"
#include "nbmc/time_series.hpp"

namespace nbmc {

/// How an h-step forecast of target index j picks its conditioning point.
/// LatestBeforeTarget conditions on observation j - h (every target in the
/// evaluation window is scored at every horizon, denominators stay equal to
/// the window length). FixedOrigin forecasts h steps out of each origin, so
/// horizons beyond 1 lose their last targets.
enum class OriginConditioning { kLatestBeforeTarget, kFixedOrigin };

struct ForecastEval {
  std::vector<int> horizons;
  Eigen::ArrayXd mse_per_h;
  Eigen::ArrayXd pl_per_h;       // mean log predictive mass at the realizations
  Eigen::ArrayXi n_origins_per_h;
  bool refit_each_origin = false;
  int n_refit_failures = 0;      // non-convergent refits, fell back to previous fit
};

/// MSE-optimal point forecast: the conditional mean at the horizon.
double point_forecast(const ModelParams& params, long x_last, double horizon_time);

/// Predictive distribution at the horizon (a transition row from x_last).
TransitionRow density_forecast(const ModelParams& params, long x_last,
                               double horizon_time, double eps);

/// Rolling out-of-sample evaluation. The first n_train observations are the
/// initial in-sample window; every later observation is a forecast target.
/// Point accuracy is the mean squared error per horizon, density accuracy
/// the mean log predictive mass. With refit_each_origin the model is
/// refitted on the expanding window up to each conditioning point (warm
/// started); otherwise the initial fit is reused everywhere.
ForecastEval evaluate_rolling(const TimeSeries& series, Eigen::Index n_train,
                              const std::vector<int>& horizons,
                              bool refit_each_origin, const FitOptions& options = {},
                              OriginConditioning conditioning =
                                  OriginConditioning::kLatestBeforeTarget);

/// Same evaluation with the model pinned to the given parameters (no
/// fitting); used for oracle scoring and for pre-fitted models.
ForecastEval evaluate_rolling_fixed(const TimeSeries& series, Eigen::Index n_train,
                                    const std::vector<int>& horizons,
                                    const ModelParams& params,
                                    OriginConditioning conditioning =
                                        OriginConditioning::kLatestBeforeTarget);

}  // namespace nbmc

#endif  // NBMC_FORECAST_HPP
