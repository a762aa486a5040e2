#include "wlsurv/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "wlsurv/special_functions.hpp"

namespace wlsurv {

namespace {

// Log of the unnormalized survival numerator
//   N(u) = (lambda+phi) Gamma(phi, lambda u) + (lambda u)^phi e^(-lambda u)
// together with the partials of log N. Everything is evaluated relative to
// the larger of the two terms, so the ratios survive lambda*u beyond the
// range where either term is representable on the linear scale.
struct CensorTerms {
  double log_num;
  double dlambda;
  double dphi;
};

CensorTerms censor_terms(const WLParams& p, double u, bool with_gradient) {
  const double lam = p.lambda, phi = p.phi;
  const double x = lam * u;
  const double lg = log_upper_inc_gamma(phi, x);
  const double log_power = phi * std::log(x) - x;
  const double m = std::max(lg, log_power);
  const double eg = std::exp(lg - m);         // Gamma(phi,x) e^-m
  const double ep = std::exp(log_power - m);  // x^phi e^-x e^-m
  const double denom = (lam + phi) * eg + ep;

  CensorTerms out;
  out.log_num = m + std::log(denom);
  out.dlambda = (eg - (1.0 + u) * ep) / denom;
  out.dphi = 0.0;
  if (with_gradient) {
    const double ratio = psi_over_upper_gamma(phi, x);  // Psi/Gamma
    out.dphi = (eg * (1.0 + (lam + phi) * ratio) + std::log(x) * ep) / denom;
  }
  return out;
}

}  // namespace

LogLikContext::LogLikContext(const CensoredSample& sample)
    : n_(sample.size()),
      d_(sample.failure_count()),
      sum_log_t_(0.0),
      sum_log1p_t_(0.0),
      sum_t_(0.0),
      scheme_(sample.scheme()) {
  if (d_ == 0)
    throw all_censored_error(
        "LogLikContext: all observations are censored; the likelihood has no interior maximum");
  std::vector<double> failures = sample.failure_times();
  std::sort(failures.begin(), failures.end());
  for (double t : failures) {
    sum_log_t_ += std::log(t);
    sum_log1p_t_ += std::log1p(t);
    sum_t_ += t;
  }
  std::vector<double> censored = sample.censored_times();
  std::sort(censored.begin(), censored.end());
  for (double t : censored) {
    if (!censor_groups_.empty() && censor_groups_.back().first == t)
      ++censor_groups_.back().second;
    else
      censor_groups_.emplace_back(t, 1);
  }
}

double loglik(const WLParams& params, const LogLikContext& ctx) {
  const double lam = params.lambda, phi = params.phi;
  const double n = static_cast<double>(ctx.n());
  const double d = static_cast<double>(ctx.failures());
  double ll = ctx.sum_log1p_t() + (phi - 1.0) * ctx.sum_log_t() -
              lam * ctx.sum_t() + d * (phi + 1.0) * std::log(lam) -
              n * std::log(lam + phi) - n * log_gamma(phi);
  for (const auto& [time, count] : ctx.censor_groups())
    ll += count * censor_terms(params, time, false).log_num;
  if (!std::isfinite(ll))
    throw evaluation_error("loglik: non-finite log-likelihood value");
  return ll;
}

std::array<double, 2> score(const WLParams& params, const LogLikContext& ctx) {
  const double lam = params.lambda, phi = params.phi;
  const double n = static_cast<double>(ctx.n());
  const double d = static_cast<double>(ctx.failures());
  double dlam = d * (phi + 1.0) / lam - ctx.sum_t() - n / (lam + phi);
  double dphi = ctx.sum_log_t() + d * std::log(lam) - n / (lam + phi) -
                n * digamma(phi);
  for (const auto& [time, count] : ctx.censor_groups()) {
    const CensorTerms terms = censor_terms(params, time, true);
    dlam += count * terms.dlambda;
    dphi += count * terms.dphi;
  }
  if (!std::isfinite(dlam) || !std::isfinite(dphi))
    throw evaluation_error("score: non-finite gradient value");
  return {dlam, dphi};
}

double loglik_complete(const WLParams& params, const std::vector<double>& times) {
  std::vector<Observation> obs;
  obs.reserve(times.size());
  for (double t : times) obs.push_back({t, 1});
  const CensoredSample sample(std::move(obs), Scheme::complete());
  return loglik(params, LogLikContext(sample));
}

}  // namespace wlsurv
