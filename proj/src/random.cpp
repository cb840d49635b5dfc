#include "random.hpp"

#include <cmath>
#include <numbers>

namespace obcast {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

StateVector Rng::gaussian_vector(std::size_t d) {
  std::vector<cplx> v(d);
  for (auto& z : v) z = complex_normal();
  return StateVector(std::move(v));
}

StateVector Rng::pure_state(std::size_t d) { return gaussian_vector(d).normalized_copy(); }

HermitianOp Rng::psd(std::size_t d) {
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = complex_normal();
  }
  return HermitianOp(g * g.adjoint());
}

HermitianOp Rng::density(std::size_t d) {
  const HermitianOp p = psd(d);
  return p.scaled(1.0 / p.trace());
}

HermitianOp Rng::hermitian(std::size_t d) {
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = complex_normal();
  }
  return HermitianOp(cplx(0.5) * (g + g.adjoint()));
}

ComplexMatrix Rng::unitary(std::size_t d) {
  // Gram-Schmidt on Gaussian columns.
  std::vector<std::vector<cplx>> cols;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<cplx> v = gaussian_vector(d).amplitudes;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) {
        const cplx ov = inner(c, v);
        for (std::size_t i = 0; i < d; ++i) v[i] -= ov * c[i];
      }
    }
    cols.push_back(StateVector(v).normalized_copy().amplitudes);
  }
  ComplexMatrix u(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) u(i, k) = cols[k][i];
  }
  return u;
}

HermitianOp Rng::contraction(std::size_t d) {
  const ComplexMatrix u = unitary(d);
  ComplexMatrix diag(d, d);
  for (std::size_t i = 0; i < d; ++i) diag(i, i) = uniform();
  return HermitianOp(u * diag * u.adjoint());
}

}  // namespace obcast
