#ifndef WLSURV_NONPARAMETRIC_HPP_
#define WLSURV_NONPARAMETRIC_HPP_

#include <string>
#include <vector>

#include "wlsurv/censoring.hpp"

namespace wlsurv {

// Right-continuous step function: value is `initial` before the first
// breakpoint and values[i] from breakpoints[i] onward.
struct StepFunction {
  double initial = 0.0;
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<double> values;

  double operator()(double x) const;
};

enum class HazardShape {
  Increasing,
  Decreasing,
  Bathtub,
  InverseBathtub,
  Indeterminate
};

const char* to_string(HazardShape shape);

// Product-limit survival estimate; steps only at failure times, and at tied
// failure/censoring times the failures are processed first (censored units
// stay in the risk set for that instant).
StepFunction kaplan_meier(const CensoredSample& sample);

// Scaled total-time-on-test transform: the points (r/n, G(r/n)) for
// r = 1..n with G built from the order statistics. Censoring indicators are
// deliberately ignored; the curve is a hazard-shape diagnostic only.
StepFunction ttt_curve(const std::vector<double>& times);

// Classifies the TTT curve by where it sits relative to the diagonal,
// using a dead zone of 0.01: entirely above = concave = increasing hazard,
// entirely below = convex = decreasing, below-then-above = bathtub,
// above-then-below = inverse bathtub. Advisory only.
HazardShape shape_hint(const StepFunction& ttt);

// Two-column CSV with an initial row at x = 0.
std::string step_to_csv(const StepFunction& fn, const std::string& x_name,
                        const std::string& y_name);

}  // namespace wlsurv

#endif  // WLSURV_NONPARAMETRIC_HPP_
