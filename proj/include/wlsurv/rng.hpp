#ifndef WLSURV_RNG_HPP_
#define WLSURV_RNG_HPP_

#include <array>
#include <cstdint>

namespace wlsurv {

// xoshiro256++ seeded through splitmix64. Self-contained so that streams are
// reproducible across platforms and standard-library versions; independent
// substreams are derived from (seed, stream) so parallel replicate
// generation does not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
  Rng(std::uint64_t seed, std::uint64_t stream);

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed, stream);
  }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform();

  // Standard normal (Box-Muller, caches the spare deviate).
  double normal();

  // Gamma(shape, rate) by Marsaglia-Tsang squeeze rejection, with the
  // U^(1/shape) boost for shape < 1.
  double gamma_variate(double shape, double rate);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wlsurv

#endif  // WLSURV_RNG_HPP_
