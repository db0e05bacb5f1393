#include "nbmc/simulate.hpp"

#include <stdexcept>
#include <string>

namespace nbmc {

namespace {

void check_schedule(const SampleSchedule& schedule) {
  if (const auto* eq = std::get_if<EqualSpacing>(&schedule)) {
    if (!(eq->dt > 0.0)) throw std::invalid_argument("schedule: dt must be > 0");
    if (eq->n < 1) throw std::invalid_argument("schedule: n must be >= 1");
  } else if (const auto* ex = std::get_if<ExponentialArrivals>(&schedule)) {
    if (!(ex->rate > 0.0)) throw std::invalid_argument("schedule: rate must be > 0");
    if (ex->n < 1) throw std::invalid_argument("schedule: n must be >= 1");
  } else {
    const auto& times = std::get<ExplicitTimes>(schedule).times;
    if (times.empty()) throw std::invalid_argument("schedule: empty time list");
    if (!(times.front() >= 0.0)) {
      throw std::invalid_argument("schedule: first time must be >= 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) {
        throw std::invalid_argument("schedule: times not strictly increasing at index " +
                                    std::to_string(i));
      }
    }
  }
}

}  // namespace

Eigen::Index schedule_length(const SampleSchedule& schedule) {
  if (const auto* eq = std::get_if<EqualSpacing>(&schedule)) return eq->n;
  if (const auto* ex = std::get_if<ExponentialArrivals>(&schedule)) return ex->n;
  return static_cast<Eigen::Index>(std::get<ExplicitTimes>(schedule).times.size());
}

Eigen::ArrayXd schedule_times(RandomStream& rng, const SampleSchedule& schedule) {
  check_schedule(schedule);
  if (const auto* eq = std::get_if<EqualSpacing>(&schedule)) {
    Eigen::ArrayXd t(eq->n);
    for (Eigen::Index i = 0; i < eq->n; ++i) t[i] = static_cast<double>(i) * eq->dt;
    return t;
  }
  if (const auto* ex = std::get_if<ExponentialArrivals>(&schedule)) {
    Eigen::ArrayXd t(ex->n);
    double cur = 0.0;
    t[0] = 0.0;
    for (Eigen::Index i = 1; i < ex->n; ++i) {
      cur += rng.exponential(ex->rate);
      t[i] = cur;
    }
    return t;
  }
  const auto& times = std::get<ExplicitTimes>(schedule).times;
  return Eigen::Map<const Eigen::ArrayXd>(times.data(), times.size());
}

long draw_stationary(RandomStream& rng, const ModelParams& params) {
  return nb_sample(rng, params.r, params.q);
}

long step(RandomStream& rng, const ModelParams& params, long x0, double dt) {
  if (!(dt > 0.0)) {
    throw std::domain_error("step: dt must be > 0");
  }
  const Prob th = theta(params, dt);
  const long survivors = binom_sample(rng, x0, th);
  const long innovations =
      nb_sample(rng, params.r + static_cast<double>(survivors), params.q * (1.0 - th));
  return survivors + innovations;
}

TimeSeries simulate_path(RandomStream& rng, const ModelParams& params,
                         const SampleSchedule& schedule, std::optional<long> x_init) {
  const Eigen::ArrayXd times = schedule_times(rng, schedule);
  Eigen::ArrayXi counts(times.size());
  long x = x_init ? *x_init : draw_stationary(rng, params);
  if (x < 0) {
    throw std::domain_error("simulate_path: initial count must be >= 0");
  }
  counts[0] = static_cast<int>(x);
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    x = step(rng, params, x, times[i] - times[i - 1]);
    counts[i] = static_cast<int>(x);
  }
  return TimeSeries(times, counts);
}

std::vector<TimeSeries> replicate_datasets(std::uint64_t master_seed,
                                           const ModelParams& params,
                                           const SampleSchedule& schedule,
                                           int n_rep) {
  if (n_rep < 1) {
    throw std::invalid_argument("replicate_datasets: n_rep must be >= 1");
  }
  std::vector<TimeSeries> out;
  out.reserve(n_rep);
  for (int i = 0; i < n_rep; ++i) {
    RandomStream rng = RandomStream::substream(master_seed, static_cast<std::uint64_t>(i));
    out.push_back(simulate_path(rng, params, schedule));
  }
  return out;
}

}  // namespace nbmc
