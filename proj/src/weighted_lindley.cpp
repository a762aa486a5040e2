#include "wlsurv/weighted_lindley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlsurv/special_functions.hpp"

namespace wlsurv {

WLParams::WLParams(double lambda_, double phi_) : lambda(lambda_), phi(phi_) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("WLParams: lambda must be positive and finite");
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::domain_error("WLParams: phi must be positive and finite");
}

double log_pdf(const WLParams& p, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("log_pdf: t must be positive and finite");
  return (p.phi + 1.0) * std::log(p.lambda) - std::log(p.lambda + p.phi) -
         log_gamma(p.phi) + (p.phi - 1.0) * std::log(t) + std::log1p(t) -
         p.lambda * t;
}

double pdf(const WLParams& p, double t) {
  if (t == 0.0) {
    // t^(phi-1): finite limit only for phi >= 1.
    if (p.phi < 1.0)
      throw std::domain_error("pdf: density diverges at t = 0 for phi < 1");
    if (p.phi > 1.0) return 0.0;
    return p.lambda * p.lambda / (p.lambda + 1.0);
  }
  return std::exp(log_pdf(p, t));
}

double log_survival(const WLParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::domain_error("log_survival: t must be nonnegative and finite");
  if (t == 0.0) return 0.0;
  const double x = p.lambda * t;
  const double term_gamma = std::log(p.lambda + p.phi) + log_upper_inc_gamma(p.phi, x);
  const double term_power = p.phi * std::log(x) - x;
  const double m = std::max(term_gamma, term_power);
  const double log_num =
      m + std::log(std::exp(term_gamma - m) + std::exp(term_power - m));
  return std::min(0.0, log_num - std::log(p.lambda + p.phi) - log_gamma(p.phi));
}

double survival(const WLParams& p, double t) {
  return std::exp(log_survival(p, t));
}

double hazard(const WLParams& p, double t) {
  const double ls = log_survival(p, t);
  if (!std::isfinite(ls))
    throw std::overflow_error("hazard: survival underflowed even on the log scale");
  return std::exp(log_pdf(p, t) - ls);
}

Moments moments(const WLParams& p) {
  const double lam = p.lambda, phi = p.phi;
  const double sum = lam + phi;
  const double mean = phi * (sum + 1.0) / (lam * sum);
  const double variance =
      ((phi + 1.0) * sum * sum - lam * lam) / (lam * lam * sum * sum);
  return {mean, variance};
}

double quantile(const WLParams& p, double prob) {
  if (!(prob > 0.0) || !(prob < 1.0))
    throw std::domain_error("quantile: prob must lie in (0, 1)");
  const double target = 1.0 - prob;  // solve S(t) = target
  const Moments m = moments(p);
  double lo = 0.0;
  double hi = m.mean + 20.0 * std::sqrt(m.variance);
  int budget = 0;
  while (survival(p, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (++budget > 200)
      throw std::runtime_error("quantile: failed to bracket the root");
  }
  // Bisect until the bracket is narrow, then polish with Newton (S' = -f).
  while (hi - lo > 1e-6 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (survival(p, mid) > target ? lo : hi) = mid;
    if (++budget > 500)
      throw std::runtime_error("quantile: bisection budget exhausted");
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double s = survival(p, t);
    if (std::fabs(s - target) <= 1e-10) return t;
    const double f = pdf(p, t);
    double next = t + (s - target) / f;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    (survival(p, next) > target ? lo : hi) = next;
    t = next;
  }
  throw std::runtime_error("quantile: did not converge to the probability tolerance");
}

std::vector<double> sample(const WLParams& p, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  const double weight = p.mixture_weight();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double shape = rng.uniform() < weight ? p.phi : p.phi + 1.0;
    out.push_back(rng.gamma_variate(shape, p.lambda));
  }
  return out;
}

}  // namespace wlsurv
