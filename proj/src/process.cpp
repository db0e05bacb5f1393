#include "nbmc/process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nbmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double xlog(long k, double logv) { return k == 0 ? 0.0 : k * logv; }

}  // namespace

ModelParams::ModelParams(double r_in, double q_in, double c_in)
    : r(r_in), q(q_in), c(c_in) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("ModelParams: r must be finite and > 0");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("ModelParams: q must lie in (0,1)");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::domain_error("ModelParams: c must be finite and > 0");
  }
}

Prob theta(const ModelParams& params, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("theta: t must be >= 0");
  }
  const double e = std::exp(-params.c * t);
  return (1.0 - params.q) * e / (1.0 - params.q * e);
}

TransitionKernel::TransitionKernel(double r, double q) : r_(r), q_(q) {
  if (!(r_ > 0.0)) {
    throw std::domain_error("TransitionKernel: r must be > 0");
  }
  if (!(q_ >= 0.0 && q_ < 1.0)) {
    throw std::domain_error("TransitionKernel: q must lie in [0,1)");
  }
}

TransitionKernel::TransitionKernel(const ModelParams& params)
    : TransitionKernel(params.r, params.q) {
  c_ = params.c;
}

double TransitionKernel::lg_r_plus(long k) const {
  if (static_cast<std::size_t>(k) >= lg_r_table_.size()) {
    std::size_t n = lg_r_table_.size();
    lg_r_table_.resize(std::max<std::size_t>(2 * n + 16, k + 1));
    for (std::size_t i = n; i < lg_r_table_.size(); ++i) {
      lg_r_table_[i] = std::lgamma(r_ + static_cast<double>(i));
    }
  }
  return lg_r_table_[k];
}

double TransitionKernel::lg_fact(long k) const {
  if (static_cast<std::size_t>(k) >= lg_fact_table_.size()) {
    std::size_t n = lg_fact_table_.size();
    lg_fact_table_.resize(std::max<std::size_t>(2 * n + 16, k + 1));
    for (std::size_t i = n; i < lg_fact_table_.size(); ++i) {
      lg_fact_table_[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
  }
  return lg_fact_table_[k];
}

Prob TransitionKernel::theta_at(double t) const {
  if (c_ < 0.0) {
    throw std::logic_error("TransitionKernel: no time scale in the discrete view");
  }
  if (t != memo_t_) {
    const double e = std::exp(-c_ * t);
    memo_theta_ = (1.0 - q_) * e / (1.0 - q_ * e);
    memo_t_ = t;
  }
  return memo_theta_;
}

LogProb TransitionKernel::log_pmf_theta(Prob th, long x0, long x1) const {
  if (!(th >= 0.0 && th <= 1.0)) {
    throw std::domain_error("log_pmf_theta: theta must lie in [0,1]");
  }
  if (x0 < 0) {
    throw std::domain_error("log_pmf_theta: x0 must be >= 0");
  }
  if (x1 < 0) {
    return kNegInf;
  }
  const double log_q = std::log(q_);
  const double log_th = std::log(th);
  const double log_1mth = std::log1p(-th);
  const double qt = q_ * (1.0 - th);
  const double log_qt = log_q + log_1mth;
  const double log_1mqt = std::log1p(-qt);
  const long m = std::min(x0, x1);

  const auto term = [&](long y) {
    // NB(x1 - y; r + y, qt) * Bin(y; x0, th), in logs.
    const double nb = lg_r_plus(x1) - lg_fact(x1 - y) - lg_r_plus(y) +
                      xlog(x1 - y, log_qt) + (r_ + y) * log_1mqt;
    const double bin = lg_fact(x0) - lg_fact(y) - lg_fact(x0 - y) +
                       xlog(y, log_th) + xlog(x0 - y, log_1mth);
    return nb + bin;
  };

  double mx = kNegInf;
  for (long y = 0; y <= m; ++y) {
    const double v = term(y);
    if (v > mx) mx = v;
  }
  if (mx == kNegInf) {
    return kNegInf;
  }
  double acc = 0.0;
  for (long y = 0; y <= m; ++y) {
    acc += std::exp(term(y) - mx);
  }
  return mx + std::log(acc);
}

LogProb TransitionKernel::log_pmf(double t, long x0, long x1) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("log_pmf: t must be >= 0");
  }
  return log_pmf_theta(theta_at(t), x0, x1);
}

TransitionRow TransitionKernel::row(double t, long x0, double eps) const {
  if (!(eps > 0.0 && eps <= 1e-4)) {
    throw std::domain_error("row: eps must lie in (0, 1e-4]");
  }
  const Prob th = theta_at(t);
  std::vector<double> probs;
  probs.reserve(64);
  double cum = 0.0, comp = 0.0;  // Kahan-compensated running mass
  long x1 = 0;
  for (;;) {
    const double p = std::exp(log_pmf_theta(th, x0, x1));
    probs.push_back(p);
    const double y = p - comp;
    const double s = cum + y;
    comp = (s - cum) - y;
    cum = s;
    if (1.0 - cum < eps) {
      break;
    }
    ++x1;
    if (x1 > max_support_) {
      throw std::length_error("transition_row: support cap " +
                              std::to_string(max_support_) + " exceeded");
    }
  }
  TransitionRow out;
  out.x0 = x0;
  out.t = t;
  out.probs = Eigen::Map<const Eigen::ArrayXd>(probs.data(), probs.size());
  out.truncation_mass = std::max(0.0, 1.0 - cum);
  return out;
}

LogProb discrete_transition_log_pmf(double r, Prob q, Prob th, long x0, long x1) {
  return TransitionKernel(r, q).log_pmf_theta(th, x0, x1);
}

LogProb transition_log_pmf(const ModelParams& params, double t, long x0, long x1) {
  return discrete_transition_log_pmf(params.r, params.q, theta(params, t), x0, x1);
}

TransitionRow transition_row(const ModelParams& params, double t, long x0, double eps) {
  return TransitionKernel(params).row(t, x0, eps);
}

LogProb stationary_log_pmf(const ModelParams& params, long x) {
  return nb_log_pmf(x, params.r, params.q);
}

BDIRates to_rates(const ModelParams& params) {
  const double s = 1.0 - params.q;
  return BDIRates{params.c * params.q / s, params.c / s,
                  params.c * params.q * params.r / s};
}

ModelParams from_rates(const BDIRates& rates) {
  if (!(rates.lambda > 0.0) || !(rates.nu > 0.0)) {
    throw std::domain_error("from_rates: lambda and nu must be > 0");
  }
  if (!(rates.mu > rates.lambda)) {
    throw std::domain_error("from_rates: mu must exceed lambda (no stationary law)");
  }
  return ModelParams(rates.nu / rates.lambda, rates.lambda / rates.mu,
                     rates.mu - rates.lambda);
}

GeneratorRates generator_rates(const ModelParams& params, long i) {
  if (i < 0) {
    throw std::domain_error("generator_rates: i must be >= 0");
  }
  const double s = 1.0 - params.q;
  const double down = params.c * static_cast<double>(i) / s;
  const double up = params.c * params.q * (static_cast<double>(i) + params.r) / s;
  return GeneratorRates{down, -(down + up), up};
}

double conditional_mean(const ModelParams& params, double t, long x0) {
  if (!(t >= 0.0)) {
    throw std::domain_error("conditional_mean: t must be >= 0");
  }
  const double phi = std::exp(-params.c * t);
  const double m = params.r * params.q / (1.0 - params.q);
  return static_cast<double>(x0) * phi + m * (1.0 - phi);
}

}  // namespace nbmc
