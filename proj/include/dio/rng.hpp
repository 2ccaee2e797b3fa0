#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace dio {

// Deterministic counter-style generator used everywhere randomness is
// needed.  std engines and distributions are avoided on purpose: their
// output differs across standard libraries, and reproducibility of noisy
// experiments down to the byte is part of the contract here.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash a list of key parts into one substream seed.  Streams keyed by
// distinct part lists are effectively independent.
inline std::uint64_t mix_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

template <class... Parts>
std::uint64_t mix_key(Parts... parts) {
  return mix_key({static_cast<std::uint64_t>(parts)...});
}

// Domain separation tags for derived random streams.
namespace rtag {
inline constexpr std::uint64_t source_draw = 0x01;
inline constexpr std::uint64_t stream_noise = 0x02;
inline constexpr std::uint64_t sensor_noise = 0x03;
inline constexpr std::uint64_t doa_draw = 0x04;
inline constexpr std::uint64_t freq_trial = 0x05;
inline constexpr std::uint64_t doa_trial = 0x06;
}  // namespace rtag

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly symmetric complex Gaussian with total variance sigma2.
  std::complex<double> cgauss(double sigma2) {
    double s = std::sqrt(sigma2 * 0.5);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace dio
