#ifndef NBMC_PROCESS_HPP
#define NBMC_PROCESS_HPP

#include <Eigen/Dense>
#include <vector>

#include "nbmc/distributions.hpp"

namespace nbmc {

/// Parameters of the stationary negative-binomial Markov process.
///
/// r > 0 is the NB shape, q in (0,1) the NB success probability, c > 0 the
/// time-decay rate of the dependence. The stationary law is NB(r, q) with
/// mean r q / (1 - q); c controls how fast the autocorrelation e^{-c t}
/// dies off.
struct ModelParams {
  double r;
  double q;
  double c;

  ModelParams(double r_, double q_, double c_);
};

/// Birth/death/immigration rates of the equivalent linear-growth chain:
/// up-rate lambda*n + nu, down-rate mu*n. A proper NB stationary law needs
/// mu > lambda > 0 and nu > 0.
struct BDIRates {
  double lambda;
  double mu;
  double nu;
};

/// Infinitesimal rates out of state i: down to i-1, up to i+1, and the
/// diagonal entry (minus their sum, so each generator row sums to zero).
struct GeneratorRates {
  double down;
  double diag;
  double up;
};

/// One row of the transition kernel: probs[j] = P[X_t = j | X_0 = x0] for
/// j = 0..N, with the mass beyond N reported in truncation_mass.
struct TransitionRow {
  long x0 = 0;
  double t = 0.0;
  Eigen::ArrayXd probs;
  double truncation_mass = 0.0;
};

/// Dependence parameter at lag t: (1-q) / (e^{c t} - q). Equals 1 at t = 0,
/// decreases strictly to 0 as t grows. Evaluated as
/// (1-q) e^{-c t} / (1 - q e^{-c t}) so it never overflows.
Prob theta(const ModelParams& params, double t);

/// Cached evaluator for the finite-mixture transition pmf
///
///   p(x0, x1) = sum_{y=0}^{x0 ^ x1} NB(x1 - y; r + y, q(1-theta))
///                                   Bin(y; x0, theta),
///
/// shared by the one-step (theta free) and continuous-time
/// (theta = theta(params, t)) views of the kernel. The log-gamma values at
/// r + k and the log-factorials are memoised, so likelihood loops cost a
/// handful of table lookups per mixture term.
///
/// Instances are single-owner: the tables and the theta memo grow lazily
/// and are not synchronised. Evaluations are deterministic; the cached path
/// is bit-identical to the uncached one.
class TransitionKernel {
 public:
  /// Discrete-time view: theta is supplied per call.
  TransitionKernel(double r, double q);

  /// Continuous-time view: theta computed from params.c and the lag.
  explicit TransitionKernel(const ModelParams& params);

  /// log p(x0 -> x1) at an explicit dependence parameter theta in [0,1].
  LogProb log_pmf_theta(Prob th, long x0, long x1) const;

  /// log p_t(x0 -> x1); requires the continuous-time constructor.
  LogProb log_pmf(double t, long x0, long x1) const;

  /// Transition row at lag t from x0, truncated once the remaining mass
  /// drops below eps (eps in (0, 1e-4]).
  TransitionRow row(double t, long x0, double eps) const;

  double r() const { return r_; }
  double q() const { return q_; }

  /// Support cap for rows; exceeding it raises std::length_error.
  void set_max_support(long cap) { max_support_ = cap; }

 private:
  double lg_r_plus(long k) const;   // lgamma(r + k)
  double lg_fact(long k) const;     // lgamma(k + 1)
  Prob theta_at(double t) const;

  double r_;
  double q_;
  double c_ = -1.0;  // < 0 marks the discrete-time view
  long max_support_ = 1L << 20;
  mutable std::vector<double> lg_r_table_;
  mutable std::vector<double> lg_fact_table_;
  mutable double memo_t_ = -1.0;
  mutable double memo_theta_ = 1.0;
};

/// One-step transition log pmf of the discrete-time chain with dependence
/// parameter theta.
LogProb discrete_transition_log_pmf(double r, Prob q, Prob th, long x0, long x1);

/// Continuous-time transition log pmf; identical to
/// discrete_transition_log_pmf with theta = theta(params, t). t = 0 is the
/// identity kernel.
LogProb transition_log_pmf(const ModelParams& params, double t, long x0, long x1);

/// Vectorized transition row (see TransitionKernel::row).
TransitionRow transition_row(const ModelParams& params, double t, long x0, double eps);

/// Stationary NB(r, q) log pmf.
LogProb stationary_log_pmf(const ModelParams& params, long x);

/// Birth/death/immigration rates equivalent to the given parameters:
/// mu = c/(1-q), lambda = c q/(1-q), nu = c q r/(1-q).
BDIRates to_rates(const ModelParams& params);

/// Inverse of to_rates: q = lambda/mu, r = nu/lambda, c = mu - lambda.
/// Throws std::domain_error unless mu > lambda > 0 and nu > 0.
ModelParams from_rates(const BDIRates& rates);

/// Infinitesimal generator entries out of state i (tridiagonal):
/// down = c i/(1-q), up = c q (i + r)/(1-q), diag = -(down + up).
GeneratorRates generator_rates(const ModelParams& params, long i);

/// E[X_t | X_0 = x0] = x0 e^{-c t} + m (1 - e^{-c t}) with the stationary
/// mean m = r q / (1 - q).
double conditional_mean(const ModelParams& params, double t, long x0);

}  // namespace nbmc

#endif  // NBMC_PROCESS_HPP
