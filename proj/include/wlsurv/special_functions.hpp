#ifndef WLSURV_SPECIAL_FUNCTIONS_HPP_
#define WLSURV_SPECIAL_FUNCTIONS_HPP_

#include "wlsurv/quadrature.hpp"

namespace wlsurv {

// log Gamma(a) for a > 0. Lanczos approximation, relative error ~1e-14.
double log_gamma(double a);

// psi(a) = d/da log Gamma(a) for a > 0. Satisfies psi(a+1) = psi(a) + 1/a.
double digamma(double a);

// Upper incomplete gamma Gamma(a, x) = int_x^inf w^(a-1) e^-w dw,
// a > 0, x >= 0. Series for x < a+1, continued fraction otherwise.
double upper_inc_gamma(double a, double x);

// log Gamma(a, x); stays finite where the linear value underflows
// (large x) or overflows (large a).
double log_upper_inc_gamma(double a, double x);

// Regularized upper gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_upper_gamma(double a, double x);

// Psi(k, x) = int_x^inf w^(k-1) log(w) e^-w dw = d/da Gamma(a, x) at a = k,
// for k > 0, x >= 0. Adaptive quadrature after an exponential-tail change
// of variables; throws tolerance_error if the subdivision budget runs out.
double psi_integral(double k, double x, const QuadratureConfig& cfg = {});

// Psi(k, x) / Gamma(k, x), i.e. E[log W | W > x] for W ~ Gamma(k, 1).
// Computed on a common log scale so it stays finite where both Psi and
// Gamma(k, x) underflow or overflow.
double psi_over_upper_gamma(double k, double x, const QuadratureConfig& cfg = {});

}  // namespace wlsurv

#endif  // WLSURV_SPECIAL_FUNCTIONS_HPP_
