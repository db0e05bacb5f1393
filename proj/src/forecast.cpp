#include "nbmc/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace nbmc {

namespace {

struct Target {
  Eigen::Index condition_on;  // index of the conditioning observation
  Eigen::Index target;        // index of the forecast target
};

std::vector<Target> targets_for(Eigen::Index n, Eigen::Index n_train, int h,
                                OriginConditioning conditioning) {
  std::vector<Target> out;
  if (conditioning == OriginConditioning::kLatestBeforeTarget) {
    for (Eigen::Index j = n_train; j < n; ++j) {
      out.push_back({j - h, j});
    }
  } else {
    for (Eigen::Index o = n_train - 1; o + h < n; ++o) {
      out.push_back({o, o + h});
    }
  }
  return out;
}

ForecastEval evaluate_with(const TimeSeries& series, Eigen::Index n_train,
                           const std::vector<int>& horizons,
                           OriginConditioning conditioning,
                           const std::function<const ModelParams&(Eigen::Index)>& model_at) {
  const Eigen::Index n = series.size();
  ForecastEval eval;
  eval.horizons = horizons;
  eval.mse_per_h = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(horizons.size()));
  eval.pl_per_h = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(horizons.size()));
  eval.n_origins_per_h =
      Eigen::ArrayXi::Zero(static_cast<Eigen::Index>(horizons.size()));

  for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
    const auto targets = targets_for(n, n_train, horizons[hi], conditioning);
    double se_sum = 0.0;
    double pl_sum = 0.0;
    for (const Target& tg : targets) {
      const ModelParams& params = model_at(tg.condition_on);
      const double gap = series.times[tg.target] - series.times[tg.condition_on];
      const long x_cond = series.counts[tg.condition_on];
      const long x_real = series.counts[tg.target];
      const double y_hat = conditional_mean(params, gap, x_cond);
      se_sum += (y_hat - x_real) * (y_hat - x_real);
      pl_sum += transition_log_pmf(params, gap, x_cond, x_real);
    }
    const auto m = static_cast<double>(targets.size());
    eval.mse_per_h[hi] = se_sum / m;
    eval.pl_per_h[hi] = pl_sum / m;
    eval.n_origins_per_h[hi] = static_cast<int>(targets.size());
  }
  return eval;
}

void validate_protocol(const TimeSeries& series, Eigen::Index n_train,
                       const std::vector<int>& horizons) {
  if (horizons.empty()) {
    throw std::invalid_argument("evaluate_rolling: no horizons given");
  }
  int max_h = 0;
  for (int h : horizons) {
    if (h < 1) throw std::invalid_argument("evaluate_rolling: horizons must be >= 1");
    max_h = std::max(max_h, h);
  }
  if (n_train + max_h > series.size()) {
    throw std::invalid_argument(
        "evaluate_rolling: n_train + max horizon exceeds the series length");
  }
  if (max_h > n_train) {
    throw std::invalid_argument("evaluate_rolling: horizon reaches before the sample start");
  }
}

}  // namespace

double point_forecast(const ModelParams& params, long x_last, double horizon_time) {
  if (!(horizon_time > 0.0)) {
    throw std::domain_error("point_forecast: horizon_time must be > 0");
  }
  return conditional_mean(params, horizon_time, x_last);
}

TransitionRow density_forecast(const ModelParams& params, long x_last,
                               double horizon_time, double eps) {
  if (!(horizon_time > 0.0)) {
    throw std::domain_error("density_forecast: horizon_time must be > 0");
  }
  return transition_row(params, horizon_time, x_last, eps);
}

ForecastEval evaluate_rolling(const TimeSeries& series, Eigen::Index n_train,
                              const std::vector<int>& horizons, bool refit_each_origin,
                              const FitOptions& options,
                              OriginConditioning conditioning) {
  validate_protocol(series, n_train, horizons);

  int refit_failures = 0;
  std::map<Eigen::Index, ModelParams> fits;  // by conditioning index

  if (!refit_each_origin) {
    const FitResult base = fit_mle(series.head(n_train), options);
    fits.emplace(-1, base.params_hat);
  } else {
    // Expanding-window fits in increasing window order, warm started from
    // the previous optimum. The smallest window gets the full multi-start.
    int max_h = 0;
    for (int h : horizons) max_h = std::max(max_h, h);
    const Eigen::Index first_o =
        conditioning == OriginConditioning::kLatestBeforeTarget ? n_train - max_h
                                                                : n_train - 1;
    const Eigen::Index last_o = series.size() - 1 -
        (conditioning == OriginConditioning::kLatestBeforeTarget
             ? *std::min_element(horizons.begin(), horizons.end())
             : 1);
    FitOptions warm = options;
    warm.min_obs = std::min<Eigen::Index>(options.min_obs, first_o + 1);
    const FitResult base = fit_mle(series.head(first_o + 1), warm);
    fits.emplace(first_o, base.params_hat);
    ModelParams prev = base.params_hat;
    for (Eigen::Index o = first_o + 1; o <= last_o; ++o) {
      const FitResult ref = fit_mle_from(series.head(o + 1), prev, warm);
      if (ref.converged) {
        prev = ref.params_hat;
      } else {
        ++refit_failures;  // keep the previous fit for this origin
      }
      fits.emplace(o, prev);
    }
  }

  const auto model_at = [&](Eigen::Index o) -> const ModelParams& {
    return refit_each_origin ? fits.at(o) : fits.at(-1);
  };

  ForecastEval eval = evaluate_with(series, n_train, horizons, conditioning, model_at);
  eval.refit_each_origin = refit_each_origin;
  eval.n_refit_failures = refit_failures;
  return eval;
}

ForecastEval evaluate_rolling_fixed(const TimeSeries& series, Eigen::Index n_train,
                                    const std::vector<int>& horizons,
                                    const ModelParams& params,
                                    OriginConditioning conditioning) {
  validate_protocol(series, n_train, horizons);
  ForecastEval eval = evaluate_with(series, n_train, horizons, conditioning,
                                    [&](Eigen::Index) -> const ModelParams& {
                                      return params;
                                    });
  eval.refit_each_origin = false;
  return eval;
}

}  // namespace nbmc
