#ifndef WLSURV_QUADRATURE_HPP_
#define WLSURV_QUADRATURE_HPP_

#include <functional>
#include <span>
#include <stdexcept>

namespace wlsurv {

// Thrown when adaptive integration exhausts its subdivision budget before
// reaching the requested tolerance.
class tolerance_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_subdivisions = 200;

  void validate() const;
};

// Adaptive Gauss-Kronrod 15(7) integration of f over the finite interval
// [a, b]. Endpoints are never evaluated, so integrable endpoint
// singularities are acceptable.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

// Same, seeded with initial breakpoints (ascending; first and last entries
// are the integration limits). Use when the integrand has a known narrow
// feature the 15-point rule could step over.
double integrate(const std::function<double(double)>& f,
                 std::span<const double> breakpoints,
                 const QuadratureConfig& cfg = {});

}  // namespace wlsurv

#endif  // WLSURV_QUADRATURE_HPP_
