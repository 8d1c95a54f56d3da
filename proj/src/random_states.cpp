#include "lindblad/random_states.hpp"

namespace lindblad {

ComplexMatrix random_complex(int dim, Rng& rng) {
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(rng.normal(), rng.normal());
  return m;
}

ComplexMatrix random_hermitian(int dim, Rng& rng, bool traceless) {
  ComplexMatrix g = random_complex(dim, rng);
  ComplexMatrix h = 0.5 * (g + g.adjoint());
  if (traceless) h -= (h.trace() / double(dim)) * ComplexMatrix::Identity(dim, dim);
  return h;
}

DensityMatrix random_density_hs(int dim, Rng& rng) {
  const ComplexMatrix g = random_complex(dim, rng);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  // Hermitize away rounding asymmetry before validation.
  w = 0.5 * (w + w.adjoint());
  return DensityMatrix::validated(w);
}

}  // namespace lindblad
