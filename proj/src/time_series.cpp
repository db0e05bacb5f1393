#include "nbmc/time_series.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace nbmc {

TimeSeries::TimeSeries(Eigen::ArrayXd times_, Eigen::ArrayXi counts_)
    : times(std::move(times_)), counts(std::move(counts_)) {
  if (times.size() != counts.size()) {
    throw std::invalid_argument("TimeSeries: times and counts differ in length");
  }
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (counts[i] < 0) {
      throw std::invalid_argument("TimeSeries: negative count at index " +
                                  std::to_string(i));
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("TimeSeries: times not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

TimeSeries TimeSeries::head(Eigen::Index n) const {
  if (n < 0 || n > size()) {
    throw std::out_of_range("TimeSeries::head: bad length");
  }
  TimeSeries out;
  out.times = times.head(n);
  out.counts = counts.head(n);
  return out;
}

}  // namespace nbmc
