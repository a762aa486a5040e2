#include "wlsurv/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "wlsurv/estimation.hpp"
#include "wlsurv/json_util.hpp"

namespace wlsurv {

namespace {

struct Replicate {
  bool fitted = false;
  double lambda_hat = 0.0;
  double phi_hat = 0.0;
  bool covers_lambda = false;
  bool covers_phi = false;
  double censored_fraction = 0.0;
};

int resolve_type2_r(const StudyConfig& cfg) {
  if (cfg.r > 0) return cfg.r;
  const int r = static_cast<int>(std::lround((1.0 - cfg.p_target) * cfg.n));
  return r;
}

void validate_config(const StudyConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("run_study: n must be >= 2");
  if (cfg.replicates < 1)
    throw std::invalid_argument("run_study: replicates must be >= 1");
  if (!(cfg.level > 0.0) || !(cfg.level < 1.0))
    throw std::invalid_argument("run_study: level must lie in (0, 1)");
  switch (cfg.scheme) {
    case SchemeType::TypeII: {
      const int r = resolve_type2_r(cfg);
      if (r < 1 || r > cfg.n)
        throw std::invalid_argument("run_study: type II r out of range");
      break;
    }
    case SchemeType::TypeI:
    case SchemeType::Random:
      if (!(cfg.p_target > 0.0) || !(cfg.p_target < 1.0))
        throw std::invalid_argument("run_study: p_target must lie in (0, 1)");
      break;
    case SchemeType::Complete:
      break;
  }
}

Replicate run_replicate(const StudyConfig& cfg, std::uint64_t index, int r,
                        double t_c, double censor_upper, double z) {
  Rng rng = Rng::for_stream(cfg.seed, index);
  const std::vector<double> lifetimes =
      sample(cfg.true_params, static_cast<std::size_t>(cfg.n), rng);

  Replicate rep;
  std::vector<Observation> complete;
  CensoredSample censored = [&]() -> CensoredSample {
    switch (cfg.scheme) {
      case SchemeType::TypeII:
        return apply_type2(lifetimes, r);
      case SchemeType::TypeI:
        return apply_type1(lifetimes, t_c);
      case SchemeType::Random: {
        std::vector<double> censor_times(lifetimes.size());
        for (double& c : censor_times) c = censor_upper * rng.uniform();
        return apply_random(lifetimes, censor_times);
      }
      case SchemeType::Complete:
      default: {
        complete.reserve(lifetimes.size());
        for (double t : lifetimes) complete.push_back({t, 1});
        return CensoredSample(std::move(complete), Scheme::complete());
      }
    }
  }();

  rep.censored_fraction =
      static_cast<double>(censored.size() - censored.failure_count()) /
      static_cast<double>(censored.size());
  if (censored.failure_count() == 0) return rep;

  FitResult result;
  try {
    result = fit(censored, ModelFamily::WeightedLindley);
  } catch (const std::exception&) {
    return rep;
  }
  if (!result.converged || !std::isfinite(result.std_errors[0]) ||
      !std::isfinite(result.std_errors[1]))
    return rep;

  rep.fitted = true;
  rep.lambda_hat = result.estimates[0];
  rep.phi_hat = result.estimates[1];
  const double half_lambda = z * result.std_errors[0];
  const double half_phi = z * result.std_errors[1];
  rep.covers_lambda =
      std::fabs(result.estimates[0] - cfg.true_params.lambda) <= half_lambda;
  rep.covers_phi =
      std::fabs(result.estimates[1] - cfg.true_params.phi) <= half_phi;
  return rep;
}

}  // namespace

double calibrate_type1(const WLParams& params, double p_star) {
  if (!(p_star > 0.0) || !(p_star < 1.0 - 1e-12))
    throw calibration_error("calibrate_type1: target proportion must lie in (0, 1 - 1e-12)");
  return quantile(params, 1.0 - p_star);
}

double calibrate_random(const WLParams& params, double p_star,
                        const QuadratureConfig& cfg) {
  if (!(p_star > 0.0) || !(p_star < 1.0))
    throw calibration_error("calibrate_random: target proportion must lie in (0, 1)");
  auto mean_survival_excess = [&](double u) {
    const double integral =
        integrate([&](double t) { return survival(params, t); }, 0.0, u, cfg);
    return integral / u - p_star;  // decreasing in u, from 1 - p_star to -p_star
  };
  double lo = moments(params).mean;
  double hi = lo;
  int budget = 0;
  while (mean_survival_excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++budget > 200)
      throw calibration_error("calibrate_random: failed to bracket the censoring bound");
  }
  while (mean_survival_excess(lo) <= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (++budget > 400)
      throw calibration_error("calibrate_random: failed to bracket the censoring bound");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = mean_survival_excess(mid);
    if (std::fabs(v) < 1e-10) return mid;
    (v > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SimulationReport run_study(const StudyConfig& cfg) {
  validate_config(cfg);

  const int r = cfg.scheme == SchemeType::TypeII ? resolve_type2_r(cfg) : 0;
  const double t_c = cfg.scheme == SchemeType::TypeI
                         ? calibrate_type1(cfg.true_params, cfg.p_target)
                         : 0.0;
  const double censor_upper = cfg.scheme == SchemeType::Random
                                  ? calibrate_random(cfg.true_params, cfg.p_target)
                                  : 0.0;
  const double z = normal_quantile(0.5 + cfg.level / 2.0);

  const int replicates = cfg.replicates;
  std::vector<Replicate> results(static_cast<std::size_t>(replicates));

  unsigned hardware = std::thread::hardware_concurrency();
  if (hardware == 0) hardware = 1;
  const int threads = std::max(
      1, std::min(cfg.threads > 0 ? cfg.threads : static_cast<int>(hardware),
                  replicates));

  auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      results[static_cast<std::size_t>(i)] = run_replicate(
          cfg, static_cast<std::uint64_t>(i), r, t_c, censor_upper, z);
  };
  if (threads == 1) {
    worker(0, replicates);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(replicates, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  // Reduce strictly in replicate order: together with per-replicate streams
  // this makes the report byte-identical for every thread count.
  SimulationReport report;
  report.config = cfg;
  report.attempted = replicates;
  double sum_frac = 0.0;
  double mre_l = 0.0, mre_p = 0.0, mse_l = 0.0, mse_p = 0.0;
  double sum_l = 0.0, sum_p = 0.0;
  int cover_l = 0, cover_p = 0;
  for (const Replicate& rep : results) {
    sum_frac += rep.censored_fraction;
    if (!rep.fitted) continue;
    ++report.converged;
    const double lam0 = cfg.true_params.lambda, phi0 = cfg.true_params.phi;
    mre_l += rep.lambda_hat / lam0;
    mre_p += rep.phi_hat / phi0;
    mse_l += (rep.lambda_hat - lam0) * (rep.lambda_hat - lam0);
    mse_p += (rep.phi_hat - phi0) * (rep.phi_hat - phi0);
    sum_l += rep.lambda_hat;
    sum_p += rep.phi_hat;
    cover_l += rep.covers_lambda ? 1 : 0;
    cover_p += rep.covers_phi ? 1 : 0;
  }
  report.discarded = report.attempted - report.converged;
  report.mean_censored_fraction = sum_frac / static_cast<double>(report.attempted);
  if (report.discarded > 0.20 * report.attempted)
    throw calibration_error(
        "run_study: more than 20% of replicates were discarded (" +
        std::to_string(report.discarded) + " of " +
        std::to_string(report.attempted) + ")");
  const double nc = static_cast<double>(report.converged);
  report.lambda_summary = {mre_l / nc, mse_l / nc,
                           sum_l / nc - cfg.true_params.lambda,
                           cover_l / nc};
  report.phi_summary = {mre_p / nc, mse_p / nc,
                        sum_p / nc - cfg.true_params.phi, cover_p / nc};
  return report;
}

nlohmann::json report_to_json(const SimulationReport& report) {
  const StudyConfig& cfg = report.config;
  nlohmann::json j;
  j["config"]["true_lambda"] = round_sig(cfg.true_params.lambda);
  j["config"]["true_phi"] = round_sig(cfg.true_params.phi);
  j["config"]["n"] = cfg.n;
  j["config"]["scheme"] = scheme_name(cfg.scheme);
  if (cfg.scheme == SchemeType::TypeII)
    j["config"]["r"] = resolve_type2_r(cfg);
  if (cfg.scheme == SchemeType::TypeI || cfg.scheme == SchemeType::Random)
    j["config"]["p_target"] = round_sig(cfg.p_target);
  j["config"]["replicates"] = cfg.replicates;
  j["config"]["seed"] = cfg.seed;
  j["config"]["level"] = round_sig(cfg.level);
  auto summary = [](const ParamSummary& s) {
    nlohmann::json out;
    out["mre"] = round_sig(s.mre);
    out["mse"] = round_sig(s.mse);
    out["bias"] = round_sig(s.bias);
    out["coverage"] = round_sig(s.coverage);
    return out;
  };
  j["phi"] = summary(report.phi_summary);
  j["lambda"] = summary(report.lambda_summary);
  j["censored_fraction"] = round_sig(report.mean_censored_fraction);
  j["replicates"]["attempted"] = report.attempted;
  j["replicates"]["converged"] = report.converged;
  j["replicates"]["discarded"] = report.discarded;
  return j;
}

std::string report_to_csv(const SimulationReport& report) {
  const StudyConfig& cfg = report.config;
  std::ostringstream out;
  out.precision(10);
  out << "n,scheme,r,p_target,phi_mre,phi_mse,phi_bias,phi_coverage,"
         "lambda_mre,lambda_mse,lambda_bias,lambda_coverage,censored_fraction\n";
  out << cfg.n << ',' << scheme_name(cfg.scheme) << ',';
  if (cfg.scheme == SchemeType::TypeII) out << resolve_type2_r(cfg);
  out << ',';
  if (cfg.scheme == SchemeType::TypeI || cfg.scheme == SchemeType::Random)
    out << cfg.p_target;
  out << ',';
  const ParamSummary& p = report.phi_summary;
  const ParamSummary& l = report.lambda_summary;
  out << p.mre << ',' << p.mse << ',' << p.bias << ',' << p.coverage << ','
      << l.mre << ',' << l.mse << ',' << l.bias << ',' << l.coverage << ','
      << report.mean_censored_fraction << '\n';
  return out.str();
}

}  // namespace wlsurv
