#ifndef NBMC_SIMULATE_HPP
#define NBMC_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "nbmc/process.hpp"
#include "nbmc/rng.hpp"
#include "nbmc/time_series.hpp"

namespace nbmc {

/// n observations at 0, dt, 2 dt, ...
struct EqualSpacing {
  double dt;
  Eigen::Index n;
};

/// n observations at cumulative i.i.d. Exp(rate) gaps starting from time 0.
struct ExponentialArrivals {
  double rate;
  Eigen::Index n;
};

/// Observations at user-supplied times (strictly increasing, first >= 0).
struct ExplicitTimes {
  std::vector<double> times;
};

using SampleSchedule = std::variant<EqualSpacing, ExponentialArrivals, ExplicitTimes>;

/// Number of observations the schedule produces.
Eigen::Index schedule_length(const SampleSchedule& schedule);

/// Materialize the observation times. Consumes rng only for
/// ExponentialArrivals. Throws std::invalid_argument on a bad schedule.
Eigen::ArrayXd schedule_times(RandomStream& rng, const SampleSchedule& schedule);

/// One draw from the stationary NB(r, q) law.
long draw_stationary(RandomStream& rng, const ModelParams& params);

/// Advance the chain by dt through the branching construction:
/// Y ~ Bin(x0, theta_dt) survivors plus Z ~ NB(r + Y, q(1 - theta_dt))
/// innovations. Distributed exactly as the closed-form transition row.
long step(RandomStream& rng, const ModelParams& params, long x0, double dt);

/// Simulate a path on the schedule. The first count is a stationary draw
/// unless x_init is given; later counts follow step() over the time gaps.
TimeSeries simulate_path(RandomStream& rng, const ModelParams& params,
                         const SampleSchedule& schedule,
                         std::optional<long> x_init = std::nullopt);

/// n_rep independent datasets, one RNG substream per replicate index.
/// Deterministic in master_seed.
std::vector<TimeSeries> replicate_datasets(std::uint64_t master_seed,
                                           const ModelParams& params,
                                           const SampleSchedule& schedule,
                                           int n_rep);

}  // namespace nbmc

#endif  // NBMC_SIMULATE_HPP
