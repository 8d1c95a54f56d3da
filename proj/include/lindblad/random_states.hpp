#pragma once

#include <cstdint>
#include <random>

#include "lindblad/operator_core.hpp"

namespace lindblad {

/// Seeded deterministic sampler. Uniform/normal variates are derived from the
/// raw mt19937_64 stream directly so outputs are identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix random_complex(int dim, Rng& rng);
ComplexMatrix random_hermitian(int dim, Rng& rng, bool traceless = false);
/// Hilbert-Schmidt-uniform full-rank state: G G^dag / tr(G G^dag) with G a
/// complex Ginibre matrix.
DensityMatrix random_density_hs(int dim, Rng& rng);

}  // namespace lindblad
