#include "wlsurv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wlsurv {

namespace {

// 15-point Kronrod abscissae (positive half) and weights; the 7-point Gauss
// rule is embedded at the odd-index nodes plus the centre. QUADPACK dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double a,
                         double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  return {a, b, resk * half, std::fabs((resk - resg) * half)};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
    throw std::invalid_argument("QuadratureConfig: rel_tol must be positive");
  if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol))
    throw std::invalid_argument("QuadratureConfig: abs_tol must be nonnegative");
  if (max_subdivisions < 1)
    throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
}

double integrate(const std::function<double(double)>& f,
                 std::span<const double> breakpoints,
                 const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate: need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]) ||
        !std::isfinite(breakpoints[i]) || !std::isfinite(breakpoints[i + 1]))
      throw std::invalid_argument("integrate: breakpoints must be finite and ascending");

  std::vector<Segment> segs;
  segs.reserve(breakpoints.size() - 1 + cfg.max_subdivisions);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    segs.push_back(gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));

  for (int split = 0;; ++split) {
    double total = 0.0, err = 0.0;
    for (const Segment& s : segs) {
      total += s.value;
      err += s.error;
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
    if (err <= tol) return total;
    if (split >= cfg.max_subdivisions)
      throw tolerance_error("integrate: subdivision budget exhausted before tolerance was reached");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    const Segment seg = segs[worst];
    const double mid = 0.5 * (seg.a + seg.b);
    segs[worst] = gauss_kronrod_15(f, seg.a, mid);
    segs.push_back(gauss_kronrod_15(f, mid, seg.b));
  }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
  const double bp[2] = {a, b};
  return integrate(f, std::span<const double>(bp, 2), cfg);
}

}  // namespace wlsurv
