#ifndef HOLONET_RNG_HPP
#define HOLONET_RNG_HPP

#include <complex>
#include <cstdint>
#include <cmath>

namespace holonet {

// Splittable counter-based generator built on SplitMix64. Child streams are
// derived by mixing (seed, stream index), so parallel realizations get
// independent, schedule-free streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // One SplitMix64 round over a keyed combination.
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Rng split(std::uint64_t stream_index) const { return Rng(mix(state_, stream_index)); }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1). 53-bit mantissa.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_int(std::uint64_t n) {
    // Rejection-free modulo is fine here; n is tiny in all call sites.
    return next_u64() % n;
  }

  // Standard normal via Box-Muller (explicit, for cross-platform determinism).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::complex<double> gaussian_complex() {
    // Standard complex normal: variance 1/2 per component.
    return {gaussian() * 0.7071067811865475244, gaussian() * 0.7071067811865475244};
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace holonet

#endif  // HOLONET_RNG_HPP
