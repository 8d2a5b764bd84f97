#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace fockfuse {

// Deterministic generator (splitmix64 core) so that seeded runs produce the
// same draws on every platform, independent of the standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
      std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() {
      return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
      return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double gaussian() {
      double u1 = uniform();
      double u2 = uniform();
      while (u1 <= 1e-300) u1 = uniform();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> cgaussian() {
      return {gaussian() * M_SQRT1_2, gaussian() * M_SQRT1_2};
    }

    Rng fork() { return Rng(next_u64()); }

  private:
    std::uint64_t state_;
};

}  // namespace fockfuse
