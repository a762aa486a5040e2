#ifndef WLSURV_MONTE_CARLO_HPP_
#define WLSURV_MONTE_CARLO_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wlsurv/censoring.hpp"
#include "wlsurv/quadrature.hpp"
#include "wlsurv/weighted_lindley.hpp"

namespace wlsurv {

// Censoring-proportion calibration could not be carried out, or a study
// discarded so many replicates that its targets are meaningless.
class calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyConfig {
  WLParams true_params{1.0, 1.0};
  int n = 0;                              // per-replicate sample size
  SchemeType scheme = SchemeType::TypeII;
  double p_target = 0.0;                  // target censoring proportion (type I / random)
  int r = 0;                              // type II failures; 0 derives round((1-p_target)*n)
  int replicates = 0;
  std::uint64_t seed = 0;
  double level = 0.95;                    // coverage confidence level
  int threads = 0;                        // 0 = hardware concurrency; never affects results
};

struct ParamSummary {
  double mre = 0.0;       // mean of estimate/truth
  double mse = 0.0;       // mean squared error
  double bias = 0.0;      // mean estimate minus truth
  double coverage = 0.0;  // fraction of CIs containing the truth
};

struct SimulationReport {
  StudyConfig config;
  ParamSummary lambda_summary;
  ParamSummary phi_summary;
  double mean_censored_fraction = 0.0;  // realized E[p] over generated samples
  int attempted = 0;
  int converged = 0;
  int discarded = 0;
};

// Type I cutoff with survival probability p_star: t_c = quantile(1 - p_star).
double calibrate_type1(const WLParams& params, double p_star);

// Upper bound u of a Uniform(0, u) censoring law with P(T > C) = p_star,
// solved from (1/u) int_0^u S(t) dt = p_star by bracketing bisection.
double calibrate_random(const WLParams& params, double p_star,
                        const QuadratureConfig& cfg = {});

// Replicated generate/censor/fit study. Each replicate draws from its own
// counter-derived random stream, and aggregation runs in replicate order,
// so the report is identical for any thread count. Aborts with
// calibration_error when more than 20% of replicates are discarded.
SimulationReport run_study(const StudyConfig& config);

nlohmann::json report_to_json(const SimulationReport& report);

// Two-line CSV (header plus one row): MRE, MSE, bias and coverage per
// parameter, phi block first, then the realized censoring proportion.
std::string report_to_csv(const SimulationReport& report);

}  // namespace wlsurv

#endif  // WLSURV_MONTE_CARLO_HPP_
