// Test-only numerical oracles, kept independent of the library's own
// evaluation paths: a recursive adaptive Simpson integrator and the helpers
// built on it.
#ifndef WLSURV_TESTS_ORACLES_HPP_
#define WLSURV_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double fa, double b, double fb, double m, double fm,
                           double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on [a, b] with absolute tolerance tol.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-14, int depth = 60) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

// Upper incomplete gamma by direct quadrature of the defining integral.
// The tail is cut where the integrand falls ~e^-45 below its peak; for
// a < 1 the w -> 0 singularity is removed by substituting u = w^a.
inline double upper_inc_gamma(double a, double x, double rel_tol = 1e-14) {
  const double peak_w = std::max(x, a - 1.0);
  const double peak_log =
      peak_w > 0.0 ? (a - 1.0) * std::log(peak_w) - peak_w : 0.0;
  double hi = std::max({x + 10.0, 2.0 * std::fabs(peak_w) + 10.0, 40.0});
  while ((a - 1.0) * std::log(hi) - hi > peak_log - 45.0) hi *= 1.5;
  const double tol = rel_tol * std::exp(peak_log);
  auto integrand = [a](double w) {
    if (w <= 0.0) return a > 1.0 ? 0.0 : 1.0;  // limit at w = 0 for a >= 1
    return std::exp((a - 1.0) * std::log(w) - w);
  };
  if (a < 1.0 && x < 1.0) {
    // remove the w -> 0 algebraic singularity with u = w^a
    auto desingularized = [a](double u) {
      return std::exp(-std::pow(u, 1.0 / a)) / a;
    };
    return integrate(desingularized, std::pow(x, a), 1.0, tol, 48) +
           integrate(integrand, 1.0, hi, tol, 48);
  }
  return integrate(integrand, x, hi, tol, 48);
}

}  // namespace oracle

#endif  // WLSURV_TESTS_ORACLES_HPP_
