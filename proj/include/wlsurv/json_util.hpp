#ifndef WLSURV_JSON_UTIL_HPP_
#define WLSURV_JSON_UTIL_HPP_

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace wlsurv {

// Round to the given number of significant digits; every numeric field in
// emitted JSON goes through this so reports are stable to re-serialization.
inline double round_sig(double v, int digits = 10) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

}  // namespace wlsurv

#endif  // WLSURV_JSON_UTIL_HPP_
