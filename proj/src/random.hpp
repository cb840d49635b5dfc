#pragma once

#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace obcast {

// Seeded generator whose output depends only on the seed (no implementation-defined distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  double normal();
  cplx complex_normal() { return {normal(), normal()}; }

  StateVector pure_state(std::size_t d);
  StateVector gaussian_vector(std::size_t d);
  HermitianOp density(std::size_t d);
  HermitianOp hermitian(std::size_t d);
  HermitianOp psd(std::size_t d);
  // 0 <= W <= I with uniformly drawn spectrum.
  HermitianOp contraction(std::size_t d);
  ComplexMatrix unitary(std::size_t d);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace obcast
