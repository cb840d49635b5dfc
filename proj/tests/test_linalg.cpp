#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "linalg.hpp"
#include "random.hpp"

using namespace obcast;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
  ComplexMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  }
  return m;
}

// Independent oracle: trace norm from Eigen's self-adjoint solver.
double eigen_trace_norm(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  return es.eigenvalues().cwiseAbs().sum();
}

// Independent oracle: F = ||sqrt(rho) sqrt(sigma)||_1 via Eigen SVD.
double eigen_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  auto sq = [](const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Eigen::MatrixXcd(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
  };
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sq(to_eigen(rho)) * sq(to_eigen(sigma)));
  return svd.singularValues().sum();
}

const double kS = 1.0 / std::numbers::sqrt2;

}  // namespace

TEST_CASE("hermitian construction symmetrizes small residuals and rejects large ones") {
  ComplexMatrix m{{1.0, cplx(0.0, 1.0)}, {cplx(0.0, -1.0) + 1e-13, 2.0}};
  HermitianOp h(m);
  CHECK(h.matrix()(1, 0) == std::conj(h.matrix()(0, 1)));
  ComplexMatrix bad{{1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(HermitianOp{bad}, Error);
  CHECK_THROWS_AS(HermitianOp{ComplexMatrix(2, 3)}, Error);
}

TEST_CASE("hermitian_eig known spectra") {
  auto e = hermitian_eig(HermitianOp::identity(3));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  HermitianOp x(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  e = hermitian_eig(x);
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));

  // Rank-one effect with amplitudes (1/sqrt2, 0, 1/2): spectrum {0, 0, 3/4}.
  const StateVector v{kS, 0.0, 0.5};
  e = hermitian_eig(v.projector());
  CHECK(std::abs(e.values[0]) <= 1e-12);
  CHECK(std::abs(e.values[1]) <= 1e-12);
  CHECK(std::abs(e.values[2] - 0.75) <= 1e-12);
}

TEST_CASE("hermitian_eig matches Eigen and reconstructs on random inputs") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.index(16);
    const HermitianOp h = rng.hermitian(d);
    const auto e = hermitian_eig(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h.matrix()));
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(std::abs(e.values[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))) <= 1e-10);
    }
    ComplexMatrix diag(d, d);
    for (std::size_t i = 0; i < d; ++i) diag(i, i) = e.values[i];
    const ComplexMatrix rec = e.vectors * diag * e.vectors.adjoint();
    CHECK((rec - h.matrix()).frobenius() <= 1e-10);
    CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::identity(d)).frobenius() <= 1e-10);
    for (std::size_t i = 1; i < d; ++i) CHECK(e.values[i - 1] <= e.values[i]);
  }
}

TEST_CASE("hermitian_eig handles degenerate spectra") {
  Rng rng(5);
  const ComplexMatrix u = rng.unitary(6);
  ComplexMatrix diag(6, 6);
  const double vals[] = {1.0, 1.0, 1.0, -2.0, -2.0, 0.0};
  for (int i = 0; i < 6; ++i) diag(i, i) = vals[i];
  const HermitianOp h(u * diag * u.adjoint());
  const auto e = hermitian_eig(h);
  CHECK(e.values[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(e.values[5] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::identity(6)).frobenius() <= 1e-10);
}

TEST_CASE("trace distance examples") {
  const auto p0 = basis_state(2, 0).projector();
  const auto p1 = basis_state(2, 1).projector();
  const auto pp = StateVector{kS, kS}.projector();
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
  CHECK(std::abs(trace_distance(p0, pp) - kS) <= 1e-12);
  CHECK_THROWS_AS(trace_distance(p0, HermitianOp::identity(3)), Error);
}

TEST_CASE("fidelity examples") {
  const auto p0 = basis_state(2, 0).projector();
  const auto pp = StateVector{kS, kS}.projector();
  const auto mixed = HermitianOp::identity(2).scaled(0.5);
  CHECK(fidelity(pp, pp) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fidelity(p0, pp) - kS) <= 1e-12);
  CHECK(std::abs(fidelity(mixed, p0) - kS) <= 1e-12);
  const HermitianOp neg(ComplexMatrix{{1.0, 0.0}, {0.0, -1e-6}});
  CHECK_THROWS_AS(fidelity(neg, p0), Error);
}

TEST_CASE("trace norm and fidelity agree with Eigen oracles") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.index(5);
    const auto rho = rng.density(d);
    const auto sigma = rng.density(d);
    CHECK(std::abs(trace_norm(rho - sigma) - eigen_trace_norm((rho - sigma).matrix())) <= 1e-10);
    const double f = fidelity(rho, sigma);
    CHECK(std::abs(f - eigen_fidelity(rho.matrix(), sigma.matrix())) <= 1e-9);
    CHECK(std::abs(f - fidelity(sigma, rho)) <= 1e-9);
    ComplexMatrix g(d, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j <= d; ++j) g(i, j) = rng.complex_normal();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(g));
    CHECK(std::abs(trace_norm(g) - svd.singularValues().sum()) <= 1e-9);
    CHECK(std::abs(operator_norm(g) - svd.singularValues()(0)) <= 1e-9);
  }
}

TEST_CASE("partial trace examples") {
  const StateVector bell{kS, 0.0, 0.0, kS};
  const auto red = partial_trace(bell.projector(), {2, 2}, {0});
  CHECK((red.matrix() - cplx(0.5) * ComplexMatrix::identity(2)).max_abs() <= 1e-15);

  const StateVector plus{kS, kS};
  const auto prod = kron(basis_state(2, 0), plus).projector();
  CHECK((partial_trace(prod, {2, 2}, {1}).matrix() - plus.projector().matrix()).max_abs() <= 1e-15);

  CHECK_THROWS_AS(partial_trace(prod, {2, 3}, {0}), Error);
  CHECK_THROWS_AS(partial_trace(prod, {2, 2}, {}), Error);
}

TEST_CASE("partial trace preserves trace, hermiticity, positivity") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = rng.density(12);
    for (const auto& keep : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}}) {
      const auto r = partial_trace(rho, {2, 3, 2}, keep);
      CHECK(std::abs(r.trace() - 1.0) <= 1e-12);
      CHECK(min_eigenvalue(r) >= -1e-12);
    }
  }
}

TEST_CASE("operator norm, kron, psd_sqrt") {
  CHECK(operator_norm(ComplexMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-14));
  const auto p0 = basis_state(2, 0).projector().matrix();
  CHECK(operator_norm(p0 * p0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto s = psd_sqrt(HermitianOp::identity(2).scaled(4.0));
  CHECK((s.matrix() - cplx(2.0) * ComplexMatrix::identity(2)).max_abs() <= 1e-12);
  CHECK_THROWS_AS(psd_sqrt(HermitianOp(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}})), Error);

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = rng.psd(1 + rng.index(8));
    const auto r = psd_sqrt(p);
    CHECK((r.matrix() * r.matrix() - p.matrix()).max_abs() <= 1e-9);
    const auto a = rng.hermitian(2);
    const auto b = rng.hermitian(3);
    const Eigen::MatrixXcd ea = to_eigen(a.matrix()), eb = to_eigen(b.matrix());
    Eigen::MatrixXcd ek(6, 6);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) ek.block(3 * i, 3 * j, 3, 3) = ea(i, j) * eb;
    }
    CHECK((kron(a, b).matrix() - from_eigen(ek)).max_abs() <= 1e-14);
  }
}
