#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "fbmc/types.hpp"

namespace fbmc {

// Deterministic random stream. Gaussian variates are produced by an explicit
// Box-Muller transform on top of mt19937_64 so that a (seed, stream) pair
// yields bit-identical sequences on every standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream & 0xffffffffULL),
                      static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::pair<double, double> gauss_pair() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

  double gauss() { return gauss_pair().first; }

  // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cplx cgauss(double variance) {
    const auto [a, b] = gauss_pair();
    const double s = std::sqrt(variance / 2.0);
    return {s * a, s * b};
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fbmc
