#ifndef NBMC_OPTIM_HPP
#define NBMC_OPTIM_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace nbmc {

struct NelderMeadOptions {
  int max_iters = 2000;
  double f_tol = 1e-8;       // spread of simplex values
  double x_tol = 1e-8;       // max vertex distance from the best point
  double init_step = 0.25;   // initial simplex edge along each axis
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  long n_evals = 0;
  int n_iters = 0;
  bool converged = false;
  std::vector<double> trace;  // best value after each iteration, non-increasing
};

/// Derivative-free simplex minimizer with the standard coefficients
/// (reflect 1, expand 2, contract 0.5, shrink 0.5).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace nbmc

#endif  // NBMC_OPTIM_HPP
