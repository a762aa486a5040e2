#include "wlsurv/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "wlsurv/json_util.hpp"
#include "wlsurv/special_functions.hpp"

namespace wlsurv {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGradTol = 1e-6;    // infinity norm, log-parameter scale
constexpr double kStepTol = 1e-10;
constexpr int kMaxIterations = 500;  // per start
constexpr double kBoundLo = 1e-6;    // original-scale iterate box
constexpr double kBoundHi = 1e6;

using Vec2 = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Family objectives
// ---------------------------------------------------------------------------

// Failure times plus grouped censored times, the common shape every family
// likelihood consumes. Sorted so evaluation order is input-order invariant.
struct SampleSums {
  std::vector<double> failures;                     // ascending
  std::vector<std::pair<double, int>> censored;     // (time, count), ascending
  std::size_t n = 0;
};

SampleSums make_sums(const CensoredSample& sample) {
  SampleSums s;
  s.n = sample.size();
  s.failures = sample.failure_times();
  std::sort(s.failures.begin(), s.failures.end());
  std::vector<double> cens = sample.censored_times();
  std::sort(cens.begin(), cens.end());
  for (double t : cens) {
    if (!s.censored.empty() && s.censored.back().first == t)
      ++s.censored.back().second;
    else
      s.censored.emplace_back(t, 1);
  }
  return s;
}

struct Objective {
  // log-likelihood in original parameters; -inf signals a rejected point
  std::function<double(const Vec2&)> loglik;
  // analytic gradient in original parameters, or empty for numeric
  std::function<Vec2(const Vec2&)> gradient;
};

Objective wl_objective(const LogLikContext& ctx) {
  Objective obj;
  obj.loglik = [&ctx](const Vec2& th) {
    try {
      return loglik(WLParams(th[0], th[1]), ctx);
    } catch (const std::exception&) {
      return -kInf;  // rejected step (non-finite value or overflowed trial point)
    }
  };
  obj.gradient = [&ctx](const Vec2& th) {
    return score(WLParams(th[0], th[1]), ctx);
  };
  return obj;
}

double weibull_loglik(const SampleSums& s, double shape, double scale) {
  double ll = 0.0;
  const double log_shape = std::log(shape), log_scale = std::log(scale);
  for (double t : s.failures) {
    const double z = std::pow(t / scale, shape);
    ll += log_shape - log_scale + (shape - 1.0) * (std::log(t) - log_scale) - z;
  }
  for (const auto& [t, count] : s.censored)
    ll -= count * std::pow(t / scale, shape);
  return ll;
}

Vec2 weibull_score(const SampleSums& s, double shape, double scale) {
  double dk = 0.0, ds = 0.0;
  for (double t : s.failures) {
    const double log_ratio = std::log(t / scale);
    const double z = std::exp(shape * log_ratio);  // (t/s)^k
    dk += 1.0 / shape + log_ratio * (1.0 - z);
    ds += (shape / scale) * (z - 1.0);
  }
  for (const auto& [t, count] : s.censored) {
    const double log_ratio = std::log(t / scale);
    const double z = std::exp(shape * log_ratio);
    dk -= count * z * log_ratio;
    ds += count * (shape / scale) * z;
  }
  return {dk, ds};
}

double gamma_loglik(const SampleSums& s, double shape, double rate) {
  const double lgam = log_gamma(shape);
  double ll = 0.0;
  for (double t : s.failures)
    ll += shape * std::log(rate) - lgam + (shape - 1.0) * std::log(t) - rate * t;
  for (const auto& [t, count] : s.censored)
    ll += count * (log_upper_inc_gamma(shape, rate * t) - lgam);
  return ll;
}

Vec2 gamma_score(const SampleSums& s, double shape, double rate) {
  const double psi_shape = digamma(shape);
  double da = 0.0, db = 0.0;
  for (double t : s.failures) {
    da += std::log(rate) - psi_shape + std::log(t);
    db += shape / rate - t;
  }
  for (const auto& [t, count] : s.censored) {
    const double x = rate * t;
    // d/da log Gamma(a,x) = Psi(a,x)/Gamma(a,x); d/dx log Gamma(a,x) =
    // -x^(a-1) e^-x / Gamma(a,x)
    da += count * (psi_over_upper_gamma(shape, x) - psi_shape);
    db -= count * t *
          std::exp((shape - 1.0) * std::log(x) - x -
                   log_upper_inc_gamma(shape, x));
  }
  return {da, db};
}

Objective family_objective(ModelFamily family, const SampleSums& sums,
                           const LogLikContext* ctx) {
  if (family == ModelFamily::WeightedLindley) return wl_objective(*ctx);
  Objective obj;
  const auto guard = [](auto eval) {
    return [eval](const Vec2& th) {
      try {
        const double v = eval(th);
        return std::isfinite(v) ? v : -kInf;
      } catch (const std::exception&) {
        return -kInf;
      }
    };
  };
  if (family == ModelFamily::Weibull) {
    obj.loglik = guard([&sums](const Vec2& th) {
      return weibull_loglik(sums, th[0], th[1]);
    });
    obj.gradient = [&sums](const Vec2& th) {
      return weibull_score(sums, th[0], th[1]);
    };
  } else {
    obj.loglik = guard([&sums](const Vec2& th) {
      return gamma_loglik(sums, th[0], th[1]);
    });
    obj.gradient = [&sums](const Vec2& th) {
      return gamma_score(sums, th[0], th[1]);
    };
  }
  return obj;
}

// ---------------------------------------------------------------------------
// BFGS over log-parameters
// ---------------------------------------------------------------------------

struct OptRun {
  Vec2 theta{};       // original scale
  double value = -kInf;
  bool converged = false;
  int iterations = 0;
};

Vec2 log_gradient(const Objective& obj, const Vec2& z, double fz) {
  // chain rule through theta = exp(z); numeric fallback uses central
  // differences with relative step 1e-7 on theta
  const Vec2 theta{std::exp(z[0]), std::exp(z[1])};
  if (obj.gradient) {
    try {
      const Vec2 g = obj.gradient(theta);
      return {g[0] * theta[0], g[1] * theta[1]};
    } catch (const std::exception&) {
      return {kNan, kNan};  // ends the start as non-converged
    }
  }
  (void)fz;
  Vec2 g;
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-7;
    Vec2 zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    const double fp = obj.loglik({std::exp(zp[0]), std::exp(zp[1])});
    const double fm = obj.loglik({std::exp(zm[0]), std::exp(zm[1])});
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Terminal phase: close to the optimum the improvement in f falls below the
// double-precision resolution of |f| and a value-based line search stalls,
// while the analytic gradient is still accurate. Newton iteration on the
// gradient (Jacobian by central differences of the gradient) drives the
// log-scale gradient below tolerance in a few steps.
bool newton_polish(const Objective& obj, Vec2& z, Vec2& g, double& last_step) {
  for (int it = 0; it < 12; ++it) {
    const double gnorm = std::max(std::fabs(g[0]), std::fabs(g[1]));
    if (gnorm < kGradTol && last_step < kStepTol) return true;
    Vec2 cols[2];
    for (int i = 0; i < 2; ++i) {
      const double h = 1e-5;
      Vec2 zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      const Vec2 gp = log_gradient(obj, zp, 0.0);
      const Vec2 gm = log_gradient(obj, zm, 0.0);
      cols[i] = {(gp[0] - gm[0]) / (2.0 * h), (gp[1] - gm[1]) / (2.0 * h)};
    }
    const double det = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0];
    if (!std::isfinite(det) || std::fabs(det) < 1e-300) return false;
    Vec2 step{-(cols[1][1] * g[0] - cols[1][0] * g[1]) / det,
              -(-cols[0][1] * g[0] + cols[0][0] * g[1]) / det};
    const double norm = std::hypot(step[0], step[1]);
    if (!std::isfinite(norm)) return false;
    if (norm > 0.25) {  // untrustworthy far from the optimum
      step[0] *= 0.25 / norm;
      step[1] *= 0.25 / norm;
    }
    const Vec2 z_new{z[0] + step[0], z[1] + step[1]};
    const Vec2 g_new = log_gradient(obj, z_new, 0.0);
    if (!std::isfinite(g_new[0]) || !std::isfinite(g_new[1])) return false;
    const double gnorm_new = std::max(std::fabs(g_new[0]), std::fabs(g_new[1]));
    if (gnorm_new > 10.0 * gnorm && gnorm > 0.0) return false;  // diverging
    z = z_new;
    g = g_new;
    last_step = norm;
  }
  return std::max(std::fabs(g[0]), std::fabs(g[1])) < kGradTol &&
         last_step < kStepTol;
}

OptRun maximize_bfgs(const Objective& obj, const Vec2& start) {
  OptRun run;
  Vec2 z{std::log(start[0]), std::log(start[1])};
  double f = obj.loglik({std::exp(z[0]), std::exp(z[1])});
  if (!std::isfinite(f)) return run;

  // inverse-Hessian approximation of the minimized objective (-loglik)
  double b00 = 1.0, b01 = 0.0, b11 = 1.0;
  Vec2 g = log_gradient(obj, z, f);
  double last_step = kInf;

  for (run.iterations = 0; run.iterations < kMaxIterations; ++run.iterations) {
    if (!std::isfinite(g[0]) || !std::isfinite(g[1])) return run;
    const double gnorm = std::max(std::fabs(g[0]), std::fabs(g[1]));
    if (gnorm < kGradTol && last_step < kStepTol) {
      run.converged = true;
      break;
    }

    // descent direction for -f: p = B * g (B approximates (-Hessian)^-1)
    Vec2 p{b00 * g[0] + b01 * g[1], b01 * g[0] + b11 * g[1]};
    double descent = p[0] * g[0] + p[1] * g[1];
    if (!(descent > 0.0)) {  // reset a non-descent approximation
      b00 = 1.0, b01 = 0.0, b11 = 1.0;
      p = g;
      descent = g[0] * g[0] + g[1] * g[1];
    }

    double alpha = 1.0;
    double f_new = -kInf;
    Vec2 z_new{};
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      z_new = {z[0] + alpha * p[0], z[1] + alpha * p[1]};
      f_new = obj.loglik({std::exp(z_new[0]), std::exp(z_new[1])});
      if (std::isfinite(f_new) && f_new >= f + 1e-4 * alpha * descent) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // value-based search hit the resolution of |f|

    const Vec2 theta_new{std::exp(z_new[0]), std::exp(z_new[1])};
    if (theta_new[0] < kBoundLo || theta_new[0] > kBoundHi ||
        theta_new[1] < kBoundLo || theta_new[1] > kBoundHi)
      return run;  // boundary drift

    const Vec2 g_new = log_gradient(obj, z_new, f_new);
    const Vec2 s{z_new[0] - z[0], z_new[1] - z[1]};
    // y for the minimized objective is -(g_new - g)
    const Vec2 y{g[0] - g_new[0], g[1] - g_new[1]};
    const double sy = s[0] * y[0] + s[1] * y[1];
    const double snorm = std::hypot(s[0], s[1]);
    if (sy > 1e-12 * snorm * std::hypot(y[0], y[1])) {
      // BFGS inverse update, written out for the 2x2 case
      const double rho = 1.0 / sy;
      const double by0 = b00 * y[0] + b01 * y[1];
      const double by1 = b01 * y[0] + b11 * y[1];
      const double yby = y[0] * by0 + y[1] * by1;
      const double c = (1.0 + rho * yby) * rho;
      b00 += c * s[0] * s[0] - rho * (s[0] * by0 + by0 * s[0]);
      b01 += c * s[0] * s[1] - rho * (s[0] * by1 + by0 * s[1]);
      b11 += c * s[1] * s[1] - rho * (s[1] * by1 + by1 * s[1]);
    }

    const bool stalled = f_new == f;
    z = z_new;
    f = f_new;
    g = g_new;
    last_step = snorm;
    if (stalled) break;  // value resolution exhausted
  }

  // endgame: near the optimum the improvement in f drops below the
  // double-precision resolution of |f|, so finish on the gradient alone
  if (!run.converged && std::isfinite(g[0]) && std::isfinite(g[1]) &&
      std::max(std::fabs(g[0]), std::fabs(g[1])) < 1e-2)
    run.converged = newton_polish(obj, z, g, last_step);

  const Vec2 theta{std::exp(z[0]), std::exp(z[1])};
  if (theta[0] < kBoundLo || theta[0] > kBoundHi || theta[1] < kBoundLo ||
      theta[1] > kBoundHi)
    run.converged = false;
  run.theta = theta;
  run.value = obj.loglik(theta);
  if (!std::isfinite(run.value)) {
    run.converged = false;
    run.value = -kInf;
  }
  return run;
}

// ---------------------------------------------------------------------------
// Starting points
// ---------------------------------------------------------------------------

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

std::optional<MeanVar> failure_moments(const std::vector<double>& failures) {
  if (failures.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double t : failures) mean += t;
  mean /= static_cast<double>(failures.size());
  double var = 0.0;
  for (double t : failures) var += (t - mean) * (t - mean);
  var /= static_cast<double>(failures.size());
  if (!(var > 0.0)) return std::nullopt;
  return MeanVar{mean, var};
}

// Solve the WL mean equation for lambda given phi.
double wl_lambda_for_phi(double mean, double phi) {
  // mean*lam^2 + (mean-1)*phi*lam - (phi^2+phi) = 0, positive root
  const double b = (mean - 1.0) * phi;
  const double disc = b * b + 4.0 * mean * (phi * phi + phi);
  return (-b + std::sqrt(disc)) / (2.0 * mean);
}

std::optional<Vec2> wl_moment_start(const std::vector<double>& failures) {
  const auto mv = failure_moments(failures);
  if (!mv) return std::nullopt;
  auto excess = [&](double phi) {
    const double lam = wl_lambda_for_phi(mv->mean, phi);
    return moments(WLParams(lam, phi)).variance - mv->var;
  };
  // scan log-spaced phi for a sign change, then bisect
  const int kGrid = 160;
  double prev_phi = 1e-3;
  double prev_val = excess(prev_phi);
  for (int i = 1; i <= kGrid; ++i) {
    const double phi = 1e-3 * std::pow(1e7, static_cast<double>(i) / kGrid);
    const double val = excess(phi);
    if (std::isfinite(prev_val) && std::isfinite(val) &&
        ((prev_val <= 0.0) != (val <= 0.0))) {
      double lo = prev_phi, hi = phi;
      for (int it = 0; it < 100; ++it) {
        const double mid = std::sqrt(lo * hi);
        ((excess(mid) <= 0.0) == (val <= 0.0) ? hi : lo) = mid;
      }
      const double phi0 = std::sqrt(lo * hi);
      const double lam0 = wl_lambda_for_phi(mv->mean, phi0);
      if (lam0 > kBoundLo && lam0 < kBoundHi && phi0 > kBoundLo && phi0 < kBoundHi)
        return Vec2{lam0, phi0};
      return std::nullopt;
    }
    prev_phi = phi;
    prev_val = val;
  }
  return std::nullopt;
}

std::vector<Vec2> family_starts(ModelFamily family,
                                const std::vector<double>& failures,
                                bool& primary_is_moment) {
  std::vector<Vec2> starts;
  primary_is_moment = false;
  const auto mv = failure_moments(failures);
  switch (family) {
    case ModelFamily::WeightedLindley: {
      if (auto s = wl_moment_start(failures)) {
        starts.push_back(*s);
        primary_is_moment = true;
      }
      break;
    }
    case ModelFamily::Weibull: {
      if (mv) {
        const double cv = std::sqrt(mv->var) / mv->mean;
        const double shape = std::clamp(std::pow(cv, -1.086), 0.05, 50.0);
        const double scale = mv->mean / std::exp(log_gamma(1.0 + 1.0 / shape));
        starts.push_back({shape, scale});
        primary_is_moment = true;
      }
      break;
    }
    case ModelFamily::Gamma: {
      if (mv) {
        const double shape = std::clamp(mv->mean * mv->mean / mv->var, 1e-3, 1e4);
        const double rate = std::clamp(mv->mean / mv->var, 1e-4, 1e4);
        starts.push_back({shape, rate});
        primary_is_moment = true;
      }
      break;
    }
  }
  return starts;
}

std::vector<Vec2> fallback_grid(ModelFamily family,
                                const std::vector<double>& failures) {
  std::vector<Vec2> grid;
  if (family == ModelFamily::WeightedLindley) {
    for (double lam : {0.01, 1.0, 100.0})
      for (double phi : {0.01, 1.0, 100.0}) grid.push_back({lam, phi});
    return grid;
  }
  double mean = 1.0;
  if (!failures.empty()) {
    for (double t : failures) mean += t;
    mean /= static_cast<double>(failures.size());
  }
  if (family == ModelFamily::Weibull) {
    for (double shape : {0.3, 1.0, 4.0})
      for (double scale : {0.2 * mean, mean, 5.0 * mean})
        grid.push_back({shape, scale});
  } else {
    for (double shape : {0.3, 1.0, 10.0})
      for (double factor : {0.3, 1.0, 3.0})
        grid.push_back({shape, factor * shape / mean});
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Information matrix helpers
// ---------------------------------------------------------------------------

bool invert_information(const Matrix2& info, Matrix2& inverse) {
  const double det = info[0][0] * info[1][1] - info[0][1] * info[1][0];
  if (!std::isfinite(det) || det <= 0.0 || info[0][0] <= 0.0) return false;
  inverse[0][0] = info[1][1] / det;
  inverse[1][1] = info[0][0] / det;
  inverse[0][1] = inverse[1][0] = -info[0][1] / det;
  return inverse[0][0] > 0.0 && inverse[1][1] > 0.0;
}

}  // namespace

const char* family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::WeightedLindley: return "weighted_lindley";
    case ModelFamily::Weibull: return "weibull";
    case ModelFamily::Gamma: return "gamma";
  }
  return "unknown";
}

std::array<const char*, 2> family_param_names(ModelFamily family) {
  switch (family) {
    case ModelFamily::WeightedLindley: return {"lambda", "phi"};
    case ModelFamily::Weibull: return {"shape", "scale"};
    case ModelFamily::Gamma: return {"shape", "rate"};
  }
  return {"p0", "p1"};
}

Matrix2 numeric_hessian(const std::function<double(const Vec2&)>& f,
                        const Vec2& point) {
  Matrix2 h{};
  const Vec2 step{std::max(1e-5 * std::fabs(point[0]), 1e-8),
                  std::max(1e-5 * std::fabs(point[1]), 1e-8)};
  const double f0 = f(point);
  for (int i = 0; i < 2; ++i) {
    Vec2 up = point, down = point;
    up[i] += step[i];
    down[i] -= step[i];
    h[i][i] = (f(up) - 2.0 * f0 + f(down)) / (step[i] * step[i]);
  }
  Vec2 pp = point, pm = point, mp = point, mm = point;
  pp[0] += step[0]; pp[1] += step[1];
  pm[0] += step[0]; pm[1] -= step[1];
  mp[0] -= step[0]; mp[1] += step[1];
  mm[0] -= step[0]; mm[1] -= step[1];
  const double cross = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step[0] * step[1]);
  h[0][1] = h[1][0] = cross;
  return h;
}

Matrix2 observed_information(const WLParams& params, const LogLikContext& ctx) {
  auto f = [&ctx](const Vec2& th) {
    return loglik(WLParams(th[0], th[1]), ctx);
  };
  const Matrix2 hess = numeric_hessian(f, {params.lambda, params.phi});
  Matrix2 info{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) info[i][j] = -hess[i][j];
  Matrix2 unused{};
  if (!invert_information(info, unused))
    throw singular_information_error("observed_information: matrix is not invertible");
  return info;
}

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // one Halley refinement through erfc
  const double e = 0.5 * std::erfc(-x / 1.4142135623730950488) - p;
  const double u = e * 2.5066282746310005024 * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

FitResult fit(const CensoredSample& sample, ModelFamily family) {
  if (sample.size() < 2)
    throw std::invalid_argument("fit: at least two observations are required");

  const SampleSums sums = make_sums(sample);
  std::optional<LogLikContext> ctx;
  if (family == ModelFamily::WeightedLindley) {
    ctx.emplace(sample);  // throws all_censored_error when d = 0
  } else if (sample.failure_count() == 0) {
    throw all_censored_error("fit: all observations are censored");
  }
  const Objective obj =
      family_objective(family, sums, ctx ? &*ctx : nullptr);

  bool primary_is_moment = false;
  std::vector<Vec2> starts = family_starts(family, sums.failures, primary_is_moment);

  FitResult out;
  out.family = family;
  out.scheme = sample.scheme();
  out.std_errors = {kNan, kNan};
  out.ci_95 = {{{kNan, kNan}, {kNan, kNan}}};

  OptRun best;
  int total_iterations = 0;
  auto consider = [&](const Vec2& start) {
    const OptRun run = maximize_bfgs(obj, start);
    total_iterations += run.iterations;
    if (run.converged && (!best.converged || run.value > best.value)) best = run;
    if (!best.converged && run.value > best.value && std::isfinite(run.value))
      best.theta = run.theta, best.value = run.value;
    return run.converged;
  };

  bool primary_converged = false;
  for (const Vec2& s : starts) primary_converged = consider(s) || primary_converged;
  if (!primary_converged)
    for (const Vec2& s : fallback_grid(family, sums.failures)) consider(s);

  out.iterations = total_iterations;
  out.estimates = best.theta;
  out.loglik_max = best.value;
  out.aic = -2.0 * best.value + 4.0;
  out.converged = best.converged;
  if (!out.converged) return out;

  out.hessian_obs = numeric_hessian(obj.loglik, best.theta);
  Matrix2 info{}, cov{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) info[i][j] = -out.hessian_obs[i][j];
  if (!invert_information(info, cov)) {
    // converged point without a usable curvature estimate: report the fit
    // as failed so downstream consumers (coverage studies) discard it
    out.converged = false;
    return out;
  }
  out.std_errors = {std::sqrt(cov[0][0]), std::sqrt(cov[1][1])};
  const double z = normal_quantile(0.975);
  for (int i = 0; i < 2; ++i)
    out.ci_95[i] = {out.estimates[i] - z * out.std_errors[i],
                    out.estimates[i] + z * out.std_errors[i]};
  return out;
}

std::array<std::array<double, 2>, 2> wald_ci(const FitResult& fit, double level) {
  if (!(level > 0.0) || !(level < 1.0))
    throw std::domain_error("wald_ci: level must lie in (0, 1)");
  if (!fit.converged)
    throw std::invalid_argument("wald_ci: fit did not converge");
  if (!std::isfinite(fit.std_errors[0]) || !std::isfinite(fit.std_errors[1]))
    throw singular_information_error("wald_ci: standard errors unavailable");
  const double z = normal_quantile(0.5 + level / 2.0);
  std::array<std::array<double, 2>, 2> ci{};
  for (int i = 0; i < 2; ++i)
    ci[i] = {fit.estimates[i] - z * fit.std_errors[i],
             fit.estimates[i] + z * fit.std_errors[i]};
  return ci;
}

std::vector<AicRow> aic_table(const CensoredSample& sample) {
  if (sample.size() < 2)
    throw std::invalid_argument("aic_table: at least two observations are required");
  if (sample.failure_count() == 0)
    throw all_censored_error("aic_table: all observations are censored");
  std::vector<AicRow> rows;
  for (ModelFamily family : {ModelFamily::WeightedLindley, ModelFamily::Weibull,
                             ModelFamily::Gamma}) {
    AicRow row{family, kNan, false, {}};
    try {
      row.result = fit(sample, family);
      row.converged = row.result.converged;
      row.aic = row.result.aic;
    } catch (const std::exception&) {
      row.converged = false;
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AicRow& a, const AicRow& b) {
    if (a.converged != b.converged) return a.converged;
    if (!a.converged) return false;
    return a.aic < b.aic;
  });
  return rows;
}

double family_survival(ModelFamily family, const std::array<double, 2>& params,
                       double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::domain_error("family_survival: t must be nonnegative and finite");
  switch (family) {
    case ModelFamily::WeightedLindley:
      return survival(WLParams(params[0], params[1]), t);
    case ModelFamily::Weibull:
      return std::exp(-std::pow(t / params[1], params[0]));
    case ModelFamily::Gamma:
      return t == 0.0 ? 1.0 : reg_upper_gamma(params[0], params[1] * t);
  }
  throw std::invalid_argument("family_survival: unknown family");
}

nlohmann::json scheme_to_json(const Scheme& scheme) {
  nlohmann::json j;
  j["type"] = scheme_name(scheme.type);
  if (scheme.type == SchemeType::TypeI) j["t_c"] = round_sig(scheme.t_c);
  if (scheme.type == SchemeType::TypeII) j["r"] = scheme.r;
  return j;
}

nlohmann::json fit_to_json(const FitResult& fit) {
  const auto names = family_param_names(fit.family);
  nlohmann::json j;
  j["family"] = family_name(fit.family);
  j["scheme"] = scheme_to_json(fit.scheme);
  for (int i = 0; i < 2; ++i) {
    j["estimates"][names[i]] = round_sig(fit.estimates[i]);
    j["std_errors"][names[i]] = round_sig(fit.std_errors[i]);
    j["ci_95"][names[i]] = {round_sig(fit.ci_95[i][0]), round_sig(fit.ci_95[i][1])};
  }
  j["loglik"] = round_sig(fit.loglik_max);
  j["aic"] = round_sig(fit.aic);
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  return j;
}

}  // namespace wlsurv
