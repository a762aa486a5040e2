#ifndef WLSURV_WEIGHTED_LINDLEY_HPP_
#define WLSURV_WEIGHTED_LINDLEY_HPP_

#include <cstddef>
#include <vector>

#include "wlsurv/rng.hpp"

namespace wlsurv {

// Parameters of the weighted Lindley distribution
//   f(t) = lambda^(phi+1) / ((lambda+phi) Gamma(phi)) t^(phi-1) (1+t) e^(-lambda t)
// which is the two-component mixture
//   p Gamma(phi, lambda) + (1-p) Gamma(phi+1, lambda),  p = lambda/(lambda+phi).
struct WLParams {
  double lambda;  // rate-like scale, > 0
  double phi;     // shape, > 0

  WLParams(double lambda_, double phi_);

  double mixture_weight() const { return lambda / (lambda + phi); }
};

struct Moments {
  double mean;
  double variance;
};

double log_pdf(const WLParams& p, double t);
double pdf(const WLParams& p, double t);

// Survival S(t) = [(lambda+phi) Gamma(phi, lambda t) + (lambda t)^phi
// e^(-lambda t)] / ((lambda+phi) Gamma(phi)); S(0) = 1. Both terms are
// combined on the log scale, so log_survival stays usable far out in the
// tail where each term underflows on its own.
double log_survival(const WLParams& p, double t);
double survival(const WLParams& p, double t);

// Hazard f(t)/S(t), evaluated as exp(log_pdf - log_survival).
double hazard(const WLParams& p, double t);

Moments moments(const WLParams& p);

// Inverse CDF: the t with 1 - S(t) = prob, to absolute tolerance 1e-10 in
// probability. Bracketing bisection with a Newton polish.
double quantile(const WLParams& p, double prob);

// n i.i.d. draws via the gamma mixture.
std::vector<double> sample(const WLParams& p, std::size_t n, Rng& rng);

}  // namespace wlsurv

#endif  // WLSURV_WEIGHTED_LINDLEY_HPP_
