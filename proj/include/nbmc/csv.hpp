#ifndef NBMC_CSV_HPP
#define NBMC_CSV_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "nbmc/forecast.hpp"
#include "nbmc/inference.hpp"
#include "nbmc/inversion.hpp"
#include "nbmc/process.hpp"
#include "nbmc/time_series.hpp"

namespace nbmc {

/// Malformed input file; carries the offending 1-based line number (0 for
/// file-level problems).
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line_number)
      : std::runtime_error(what), line(line_number) {}
  long line;
};

/// Could not open or write a file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- series (`time,count`) -------------------------------------------------

TimeSeries read_series_csv(const std::string& path);
TimeSeries read_series_csv(std::istream& in, const std::string& origin);
void write_series_csv(const std::string& path, const TimeSeries& series);

// ---- fit result (flat `key = value` text) ----------------------------------

struct FitFile {
  double r_hat;
  double q_hat;
  double c_hat;
  double loglik;
  bool converged;
};

void write_fit_file(const std::string& path, const FitResult& fit);
FitFile read_fit_file(const std::string& path);

// ---- study summary (`size,mean_r,sd_r,mean_q,sd_q,mean_c,sd_c`) -------------

void write_study_csv(const std::string& path, const StudySummary& summary);
std::vector<StudyRow> read_study_csv(const std::string& path);

// ---- forecast evaluation (`horizon,mse,pl`) ---------------------------------

void write_forecast_csv(const std::string& path, const ForecastEval& eval);
ForecastEval read_forecast_csv(const std::string& path);

// ---- transition row (`x1,prob` + truncation-mass comment) -------------------

void write_transition_csv(const std::string& path, const TransitionRow& row);
TransitionRow read_transition_csv(const std::string& path);

// ---- benchmark report --------------------------------------------------------

void write_bench_csv(const std::string& path, const BenchReport& report);
BenchReport read_bench_csv(const std::string& path);

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

}  // namespace nbmc

#endif  // NBMC_CSV_HPP
