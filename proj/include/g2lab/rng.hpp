#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace g2lab {

// Deterministic RNG for seeded test corpora. Uniform/normal draws are
// generated from raw mt19937_64 words so that identical seeds give
// identical streams on every platform (std:: distributions do not
// guarantee that).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    // Box-Muller; uncached on purpose (stream stays position independent)
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

} // namespace g2lab
