#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "karoubi/common.hpp"

namespace karoubi {

// Seeded generator. All sampling in the library flows through one of these;
// `split()` derives an independent child stream so that adding draws in one
// component does not shift another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool bit() { return (gen_() >> 17) & 1u; }

  // Box-Muller, spelled out so streams do not depend on the stdlib's
  // normal_distribution implementation.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Complex cgaussian() { return Complex(gaussian(), gaussian()); }

  Rng split() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace karoubi
