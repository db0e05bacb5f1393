#ifndef NBMC_TIME_SERIES_HPP
#define NBMC_TIME_SERIES_HPP

#include <Eigen/Dense>

namespace nbmc {

/// An observed path: strictly increasing times paired with non-negative
/// integer counts.
struct TimeSeries {
  Eigen::ArrayXd times;
  Eigen::ArrayXi counts;

  TimeSeries() = default;
  TimeSeries(Eigen::ArrayXd times_, Eigen::ArrayXi counts_);

  Eigen::Index size() const { return times.size(); }

  /// First n observations.
  TimeSeries head(Eigen::Index n) const;
};

}  // namespace nbmc

#endif  // NBMC_TIME_SERIES_HPP
