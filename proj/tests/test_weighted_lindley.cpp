#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wlsurv/special_functions.hpp"
#include "wlsurv/weighted_lindley.hpp"

using namespace wlsurv;

namespace {

double rel_err(double value, double reference) {
  return std::fabs(value - reference) /
         std::max({std::fabs(reference), std::fabs(value), 1e-300});
}

// pdf integral over (0, t) by the test-side Simpson oracle; the t^(phi-1)
// singularity for phi < 1 is removed by substituting u = t^phi on (0, 1)
double cdf_by_quadrature(const WLParams& p, double t, double tol = 1e-13) {
  auto f = [&p](double x) { return pdf(p, x); };
  auto head = [&p](double u) {
    const double x = std::pow(u, 1.0 / p.phi);
    const double norm = (p.phi + 1.0) * std::log(p.lambda) -
                        std::log(p.lambda + p.phi) - log_gamma(p.phi);
    // t^(phi-1) dt = du / phi
    return std::exp(norm) * (1.0 + x) * std::exp(-p.lambda * x) / p.phi;
  };
  const double split = std::min(1.0, t);
  double result = oracle::integrate(head, 0.0, std::pow(split, p.phi), tol, 48);
  if (t > 1.0) result += oracle::integrate(f, 1.0, t, tol, 48);
  return result;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(WLParams(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(WLParams(1.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(WLParams(std::nan(""), 1.0), std::domain_error);
  const WLParams p(2.0, 0.5);
  CHECK(p.mixture_weight() == doctest::Approx(0.8));
}

TEST_CASE("pdf closed forms and reference value") {
  const WLParams unit(1.0, 1.0);
  CHECK(pdf(unit, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // t -> 0 limit of (1/2)(1+t)e^-t
  CHECK(pdf(unit, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pdf(unit, 1e-9) == doctest::Approx(0.5).epsilon(1e-6));
  // independent high-precision evaluation at the rats-scale parameters
  const WLParams rats(0.0978, 21.7545);
  CHECK(rel_err(pdf(rats, 200.0), 0.007403886451591152840126) < 1e-12);

  CHECK_THROWS_AS(pdf(unit, -1.0), std::domain_error);
  CHECK_THROWS_AS(pdf(WLParams(1.0, 0.5), 0.0), std::domain_error);
  CHECK(pdf(WLParams(1.0, 2.0), 0.0) == 0.0);
}

TEST_CASE("survival closed forms, oracle, and bounds") {
  const WLParams unit(1.0, 1.0);
  CHECK(survival(unit, 0.0) == 1.0);
  CHECK(survival(WLParams(0.3, 4.2), 0.0) == 1.0);
  CHECK(survival(unit, 1.0) == doctest::Approx(1.5 * std::exp(-1.0)).epsilon(1e-13));
  const WLParams p(2.0, 0.5);
  CHECK(rel_err(survival(p, 0.8), 0.1312716215957485143521) < 1e-12);
  CHECK(survival(p, 0.8) ==
        doctest::Approx(1.0 - cdf_by_quadrature(p, 0.8)).epsilon(1e-11));
  CHECK(survival(p, 1e4) >= 0.0);
  CHECK(survival(p, 1e4) < 1e-300);
  CHECK_THROWS_AS(survival(p, -0.1), std::domain_error);
}

TEST_CASE("survival equals one minus the pdf integral on a grid") {
  for (const WLParams& p :
       {WLParams(0.5, 2.0), WLParams(3.0, 2.0), WLParams(2.0, 3.0)}) {
    for (double t : {0.2, 0.7, 1.5, 4.0}) {
      CHECK_MESSAGE(
          std::fabs(survival(p, t) - (1.0 - cdf_by_quadrature(p, t))) < 1e-11,
          "lambda=", p.lambda, " phi=", p.phi, " t=", t);
    }
  }
}

TEST_CASE("pdf integrates to one") {
  for (const WLParams& p : {WLParams(0.5, 2.0), WLParams(3.0, 2.0),
                            WLParams(2.0, 3.0), WLParams(0.0978, 21.7545)}) {
    const Moments m = moments(p);
    const double far = m.mean + 40.0 * std::sqrt(m.variance);
    CHECK(cdf_by_quadrature(p, far, 1e-12) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("hazard identities") {
  const WLParams unit(1.0, 1.0);
  CHECK(hazard(unit, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // h * S = f
  for (const WLParams& p : {WLParams(2.0, 3.0), WLParams(0.5, 2.0)})
    for (double t : {0.1, 0.5, 1.0, 2.5, 7.0})
      CHECK(rel_err(hazard(p, t) * survival(p, t), pdf(p, t)) < 1e-10);
  // phi > 1: h -> 0 at the origin
  CHECK(hazard(WLParams(1.0, 3.0), 1e-8) < 1e-6);
  // increasing-hazard regime
  const WLParams inc(2.0, 3.0);
  double prev = 0.0;
  for (double t = 0.1; t <= 5.0; t += 0.35) {
    const double h = hazard(inc, t);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("moments closed forms") {
  const Moments m1 = moments(WLParams(2.0, 1.0));
  CHECK(m1.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m1.variance == doctest::Approx(7.0 / 18.0).epsilon(1e-15));
  const Moments m2 = moments(WLParams(0.5, 2.0));
  CHECK(m2.mean == doctest::Approx(5.6).epsilon(1e-15));
}

TEST_CASE("mixture identity: pdf = p gamma(phi) + (1-p) gamma(phi+1)") {
  auto gamma_pdf = [](double shape, double rate, double t) {
    return std::exp(shape * std::log(rate) - log_gamma(shape) +
                    (shape - 1.0) * std::log(t) - rate * t);
  };
  for (const WLParams& p : {WLParams(1.5, 0.7), WLParams(0.5, 2.0),
                            WLParams(3.0, 2.0), WLParams(0.0978, 21.7545)}) {
    const double w = p.mixture_weight();
    for (double t : {0.05, 0.4, 1.3, 6.0}) {
      const double mixture = w * gamma_pdf(p.phi, p.lambda, t) +
                             (1.0 - w) * gamma_pdf(p.phi + 1.0, p.lambda, t);
      CHECK(rel_err(pdf(p, t), mixture) < 1e-12);
    }
  }
}

TEST_CASE("survival derivative equals minus pdf") {
  for (const WLParams& p : {WLParams(2.0, 3.0), WLParams(0.8, 1.6)})
    for (double t : {0.3, 1.0, 2.2, 5.5}) {
      const double h = 1e-6 * t;
      const double slope = (survival(p, t + h) - survival(p, t - h)) / (2.0 * h);
      CHECK(rel_err(-slope, pdf(p, t)) < 1e-5);
    }
}

TEST_CASE("quantile round trip and monotonicity") {
  const WLParams p(2.0, 0.5);
  CHECK(rel_err(quantile(p, 0.8), 0.5895336465408107273922) < 1e-8);
  double prev = 0.0;
  for (double prob : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    const double t = quantile(p, prob);
    CHECK(t > prev);
    CHECK(std::fabs(survival(p, t) - (1.0 - prob)) < 1e-9);
    prev = t;
  }
  CHECK(quantile(p, 1e-9) < 1e-3);
  CHECK_THROWS_AS(quantile(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(quantile(p, 1.0), std::domain_error);
}

TEST_CASE("sampler: contract, moments, and Kolmogorov-Smirnov") {
  Rng rng(20240229);
  const WLParams p(2.0, 0.5);
  CHECK_THROWS_AS(sample(p, 0, rng), std::invalid_argument);
  CHECK(sample(p, 1, rng).size() == 1);
  CHECK(sample(p, 1, rng)[0] > 0.0);

  // law of large numbers against the closed-form mean
  const std::size_t big = 1000000;
  const std::vector<double> draws = sample(p, big, rng);
  double mean = 0.0;
  for (double t : draws) mean += t;
  mean /= static_cast<double>(big);
  const Moments m = moments(p);
  const double se = std::sqrt(m.variance / static_cast<double>(big));
  CHECK(std::fabs(mean - m.mean) < 4.0 * se);

  // KS statistic against the CDF 1 - S at the 1% level for three settings
  for (const WLParams& q :
       {WLParams(2.0, 0.5), WLParams(2.0, 3.0), WLParams(0.5, 2.0)}) {
    const std::size_t n = 100000;
    std::vector<double> x = sample(q, n, rng);
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cdf = 1.0 - survival(q, x[i]);
      ks = std::max(ks, std::fabs(cdf - static_cast<double>(i + 1) / n));
      ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
    }
    const double critical_1pct = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK_MESSAGE(ks < critical_1pct, "lambda=", q.lambda, " phi=", q.phi,
                  " ks=", ks);
  }
}

TEST_CASE("sampler streams are deterministic and decorrelated") {
  Rng a = Rng::for_stream(42, 7);
  Rng b = Rng::for_stream(42, 7);
  Rng c = Rng::for_stream(42, 8);
  const WLParams p(1.0, 1.0);
  const auto xa = sample(p, 5, a);
  const auto xb = sample(p, 5, b);
  const auto xc = sample(p, 5, c);
  CHECK(xa == xb);
  CHECK(xa != xc);
}
