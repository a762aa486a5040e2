#ifndef WLSURV_ESTIMATION_HPP_
#define WLSURV_ESTIMATION_HPP_

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlsurv/censoring.hpp"
#include "wlsurv/likelihood.hpp"
#include "wlsurv/weighted_lindley.hpp"

namespace wlsurv {

enum class ModelFamily { WeightedLindley, Weibull, Gamma };

const char* family_name(ModelFamily family);
std::array<const char*, 2> family_param_names(ModelFamily family);

using Matrix2 = std::array<std::array<double, 2>, 2>;

class singular_information_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximum-likelihood fit of a two-parameter family under the sample's
// censoring scheme. Parameter order: WL (lambda, phi); Weibull (shape,
// scale) with S(t) = exp(-(t/scale)^shape); Gamma (shape, rate).
struct FitResult {
  ModelFamily family = ModelFamily::WeightedLindley;
  Scheme scheme;
  std::array<double, 2> estimates{};
  std::array<double, 2> std_errors{};
  std::array<std::array<double, 2>, 2> ci_95{};  // per parameter: {lower, upper}
  double loglik_max = 0.0;
  double aic = 0.0;
  Matrix2 hessian_obs{};  // Hessian of the log-likelihood at the optimum
  bool converged = false;
  int iterations = 0;
};

// Quasi-Newton (BFGS) maximization over log-parameters with backtracking
// line search; moment-matching start with a log-spaced fallback grid.
// Standard errors come from the numeric observed information in the
// original parameter scale. Non-convergence is reported through
// converged = false (with NaN standard errors), not an exception.
FitResult fit(const CensoredSample& sample,
              ModelFamily family = ModelFamily::WeightedLindley);

// Numeric observed information (negative Hessian of loglik) by central
// differences with per-coordinate steps max(1e-5 |theta_i|, 1e-8).
// Throws singular_information_error if the result is not invertible.
Matrix2 observed_information(const WLParams& params, const LogLikContext& ctx);

// Central-difference Hessian of an arbitrary bivariate function;
// off-diagonals are averaged so the result is symmetric by construction.
Matrix2 numeric_hessian(const std::function<double(const std::array<double, 2>&)>& f,
                        const std::array<double, 2>& point);

// Wald intervals estimate +- z_(1-(1-level)/2) * SE at an arbitrary level.
std::array<std::array<double, 2>, 2> wald_ci(const FitResult& fit, double level);

// Standard normal quantile (Acklam's approximation plus one Halley step).
double normal_quantile(double p);

struct AicRow {
  ModelFamily family;
  double aic;
  bool converged;
  FitResult result;
};

// Fits all three families and returns converged rows sorted by ascending
// AIC; non-converged rows are kept at the end, excluded from the ranking.
std::vector<AicRow> aic_table(const CensoredSample& sample);

// Survival function of a family at the given parameter vector; t >= 0.
double family_survival(ModelFamily family, const std::array<double, 2>& params,
                       double t);

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json scheme_to_json(const Scheme& scheme);

}  // namespace wlsurv

#endif  // WLSURV_ESTIMATION_HPP_
