#ifndef NBMC_INVERSION_HPP
#define NBMC_INVERSION_HPP

#include <complex>
#include <vector>

#include "nbmc/process.hpp"
#include "nbmc/time_series.hpp"

namespace nbmc {

/// A transition row requested through the generating-function route.
/// n_points is the DFT length: a power of two, at least 8, and large enough
/// that the row's support fits comfortably in the first half.
struct PgfQuery {
  ModelParams params;
  double t;
  long x0;
  int n_points;
};

/// Conditional probability generating function E[z^{X_t} | X_0 = x0] on the
/// unit circle, with xi = (1 - z) / (1 - q(1-theta) z):
///
///   G(z) = ((1 - xi) / z)^r * (1 - theta xi)^{x0},
///
/// using the principal branch for the real power r (the base stays in the
/// right half-plane for valid parameters; violations raise an error rather
/// than switching branches). Throws std::domain_error unless |z| = 1 within
/// 1e-12.
std::complex<double> pgf_eval(const PgfQuery& query, std::complex<double> z);

/// Transition row recovered by sampling the pgf on the unit circle and
/// applying an inverse DFT. Negative roundoff is clipped at zero and the
/// row renormalized; bins in the upper half of the period are reported as
/// truncation mass. Throws std::runtime_error when that mass exceeds 1e-8
/// (the support does not fit, aliasing would contaminate the row).
TransitionRow invert_transition_row(const PgfQuery& query);

/// Default DFT length: the smallest power of two at least 4x the exact
/// row's truncation support at eps = 1e-10, and at least 8.
int default_n_points(const ModelParams& params, double t, long x0);

/// One benchmark configuration: a synthetic equally spaced series of
/// n_obs observations at gap dt from the given parameters.
struct BenchCell {
  ModelParams params;
  double dt;
  int n_obs;
};

struct BenchCellResult {
  BenchCell cell;
  double exact_seconds;      // median full-likelihood build, closed form
  double inversion_seconds;  // median full-likelihood build, DFT inversion
  double ratio;              // inversion_seconds / exact_seconds
  double max_abs_diff;       // max |exact - inverted| over the visited rows
};

struct BenchReport {
  std::vector<BenchCellResult> cells;
  int repetitions = 0;
};

/// Times full-likelihood construction through both routes on each cell and
/// records the worst probability discrepancy between them.
BenchReport bench_compare(const std::vector<BenchCell>& grid, int repetitions);

}  // namespace nbmc

#endif  // NBMC_INVERSION_HPP
