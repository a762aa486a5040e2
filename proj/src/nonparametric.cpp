#include "wlsurv/nonparametric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wlsurv {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

double StepFunction::operator()(double x) const {
  // last breakpoint <= x, right-continuous
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  if (it == breakpoints.begin()) return initial;
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

const char* to_string(HazardShape shape) {
  switch (shape) {
    case HazardShape::Increasing: return "increasing";
    case HazardShape::Decreasing: return "decreasing";
    case HazardShape::Bathtub: return "bathtub";
    case HazardShape::InverseBathtub: return "inverse-bathtub";
    case HazardShape::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

StepFunction kaplan_meier(const CensoredSample& sample) {
  if (sample.failure_count() == 0)
    throw std::invalid_argument("kaplan_meier: at least one failure is required");
  std::vector<Observation> obs(sample.observations());
  std::sort(obs.begin(), obs.end(),
            [](const Observation& a, const Observation& b) { return a.time < b.time; });

  StepFunction fn;
  fn.initial = 1.0;
  double surv = 1.0;
  std::size_t at_risk = obs.size();
  std::size_t i = 0;
  while (i < obs.size()) {
    const double t = obs[i].time;
    std::size_t deaths = 0, losses = 0;
    while (i < obs.size() && obs[i].time == t) {
      (obs[i].status == 1 ? deaths : losses) += 1;
      ++i;
    }
    if (deaths > 0) {
      surv *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
      fn.breakpoints.push_back(t);
      fn.values.push_back(surv);
    }
    at_risk -= deaths + losses;
  }
  return fn;
}

StepFunction ttt_curve(const std::vector<double>& times) {
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("ttt_curve: need at least two times");
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0.0) || !std::isfinite(sorted.back()))
    throw std::invalid_argument("ttt_curve: times must be positive and finite");
  double total = 0.0;
  for (double t : sorted) total += t;

  StepFunction fn;
  fn.initial = 0.0;
  fn.breakpoints.reserve(n);
  fn.values.reserve(n);
  double partial = 0.0;
  for (std::size_t r = 1; r <= n; ++r) {
    partial += sorted[r - 1];
    const double g =
        (partial + static_cast<double>(n - r) * sorted[r - 1]) / total;
    fn.breakpoints.push_back(static_cast<double>(r) / static_cast<double>(n));
    fn.values.push_back(g);
  }
  return fn;
}

HazardShape shape_hint(const StepFunction& ttt) {
  constexpr double kDeadZone = 0.01;
  // signs of the significant deviations G(r/n) - r/n, in order
  std::vector<int> signs;
  for (std::size_t i = 0; i < ttt.breakpoints.size(); ++i) {
    const double dev = ttt.values[i] - ttt.breakpoints[i];
    if (dev > kDeadZone) signs.push_back(+1);
    else if (dev < -kDeadZone) signs.push_back(-1);
  }
  if (signs.empty()) return HazardShape::Indeterminate;

  std::size_t positives = 0;
  std::size_t flips = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] > 0) ++positives;
    if (i > 0 && signs[i] != signs[i - 1]) ++flips;
  }
  const std::size_t negatives = signs.size() - positives;

  if (negatives == 0) return HazardShape::Increasing;   // concave, above the diagonal
  if (positives == 0) return HazardShape::Decreasing;   // convex, below
  if (flips == 1)
    return signs.front() < 0 ? HazardShape::Bathtub : HazardShape::InverseBathtub;
  // noisy mixtures: fall back to a 90% majority
  const double frac = static_cast<double>(positives) / static_cast<double>(signs.size());
  if (frac >= 0.9) return HazardShape::Increasing;
  if (frac <= 0.1) return HazardShape::Decreasing;
  return HazardShape::Indeterminate;
}

std::string step_to_csv(const StepFunction& fn, const std::string& x_name,
                        const std::string& y_name) {
  std::string out = x_name + "," + y_name + "\n";
  out += "0," + format_double(fn.initial) + "\n";
  for (std::size_t i = 0; i < fn.breakpoints.size(); ++i) {
    out += format_double(fn.breakpoints[i]);
    out += ',';
    out += format_double(fn.values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace wlsurv
