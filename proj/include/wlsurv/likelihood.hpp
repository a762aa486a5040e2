#ifndef WLSURV_LIKELIHOOD_HPP_
#define WLSURV_LIKELIHOOD_HPP_

#include <array>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wlsurv/censoring.hpp"
#include "wlsurv/weighted_lindley.hpp"

namespace wlsurv {

// A log-likelihood evaluation produced a non-finite value; optimizers treat
// the step as rejected.
class evaluation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every observation is censored: the likelihood is monotone in lambda and
// has no interior maximum.
class all_censored_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sufficient statistics of a censored sample for the weighted Lindley
// log-likelihood. Sums are accumulated over sorted values and equal
// censored times are grouped, so permuting the input observations leaves
// loglik and score bit-identical.
class LogLikContext {
 public:
  explicit LogLikContext(const CensoredSample& sample);

  std::size_t n() const { return n_; }
  std::size_t failures() const { return d_; }
  double sum_log_t() const { return sum_log_t_; }
  double sum_log1p_t() const { return sum_log1p_t_; }
  double sum_t() const { return sum_t_; }
  const std::vector<std::pair<double, int>>& censor_groups() const {
    return censor_groups_;
  }
  const Scheme& scheme() const { return scheme_; }

 private:
  std::size_t n_;
  std::size_t d_;
  double sum_log_t_;
  double sum_log1p_t_;
  double sum_t_;
  std::vector<std::pair<double, int>> censor_groups_;  // (time, multiplicity), ascending
  Scheme scheme_;
};

// Scheme-appropriate log-likelihood. For type II the parameter-free
// combinatorial constant log(n!/(n-r)!) is excluded, so reported values and
// AICs are comparable across schemes; with r = n this reduces exactly to the
// complete-data log-likelihood.
double loglik(const WLParams& params, const LogLikContext& ctx);

// Analytic gradient (d/dlambda, d/dphi) of loglik.
std::array<double, 2> score(const WLParams& params, const LogLikContext& ctx);

// Complete-data log-likelihood, sum of log_pdf over the sample.
double loglik_complete(const WLParams& params, const std::vector<double>& times);

}  // namespace wlsurv

#endif  // WLSURV_LIKELIHOOD_HPP_
