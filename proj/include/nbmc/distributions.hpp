#ifndef NBMC_DISTRIBUTIONS_HPP
#define NBMC_DISTRIBUTIONS_HPP

#include <span>

#include "nbmc/rng.hpp"

namespace nbmc {

// Probabilities and log-probabilities are carried as plain doubles; the
// aliases mark intent in signatures. A Prob lies in [0,1], a LogProb in
// [-inf, 0] (up to ~1e-12 roundoff slack at the top).
using Prob = double;
using LogProb = double;

/// log C(a, k) for real a > -1 and integer k >= 0, via log-gamma:
/// lgamma(a+1) - lgamma(k+1) - lgamma(a-k+1). Exact log of the integer
/// binomial coefficient when a is integral.
///
/// Throws std::domain_error if k < 0 or a - k <= -1.
double log_binom_coeff(double a, long k);

/// Negative-binomial log pmf with real shape r > 0 and success
/// probability q in [0, 1):  log[ C(x+r-1, x) q^x (1-q)^r ].
/// q = 0 is the degenerate point mass at zero.
LogProb nb_log_pmf(long x, double r, Prob q);

/// Binomial log pmf, 0 <= y <= n, theta in [0, 1], with the 0*log(0) = 0
/// convention at the endpoints.
LogProb binom_log_pmf(long y, long n, Prob theta);

/// log sum_i exp(v_i), stable under max-subtraction. Returns -inf when every
/// input is -inf. Throws std::invalid_argument on empty input.
double log_sum_exp(std::span<const double> values);

/// Gamma(shape, scale) variate; Marsaglia-Tsang squeeze for shape >= 1 and
/// the power boost for shape < 1.
double gamma_sample(RandomStream& rng, double shape, double scale);

/// Poisson variate. Exact for any mean >= 0 (product-of-uniforms inversion,
/// applied in chunks so large means never underflow exp(-mean)).
long poisson_sample(RandomStream& rng, double mean);

/// Negative-binomial variate with real shape, via the gamma-Poisson mixture:
/// G ~ Gamma(r, q/(1-q)), X | G ~ Poisson(G). Exact for real r.
long nb_sample(RandomStream& rng, double r, Prob q);

/// Binomial variate by inverse-CDF walk along the pmf recurrence.
long binom_sample(RandomStream& rng, long n, Prob theta);

}  // namespace nbmc

#endif  // NBMC_DISTRIBUTIONS_HPP
