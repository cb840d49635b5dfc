#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace obcast {

using cplx = std::complex<double>;

// Dense row-major complex matrix; entries are always finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix outer(const std::vector<cplx>& ket, const std::vector<cplx>& bra);
  static ComplexMatrix column(const std::vector<cplx>& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const std::vector<cplx>& entries() const { return data_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;
  double frobenius() const;
  double max_abs() const;
  std::vector<cplx> col(std::size_t c) const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// Square matrix with max |M - M^dag| <= 1e-12, stored exactly Hermitian.
class HermitianOp {
 public:
  static constexpr double kHermTol = 1e-12;

  HermitianOp() = default;
  explicit HermitianOp(const ComplexMatrix& m);

  static HermitianOp identity(std::size_t n) { return HermitianOp(ComplexMatrix::identity(n)); }
  static HermitianOp projector(const std::vector<cplx>& ket);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOp operator+(const HermitianOp& o) const;
  HermitianOp operator-(const HermitianOp& o) const;
  HermitianOp scaled(double s) const;

 private:
  ComplexMatrix m_;
};

// Amplitude vector; may be unnormalized.
struct StateVector {
  std::vector<cplx> amplitudes;

  StateVector() = default;
  StateVector(std::initializer_list<cplx> a) : amplitudes(a) {}
  explicit StateVector(std::vector<cplx> a) : amplitudes(std::move(a)) {}

  std::size_t dim() const { return amplitudes.size(); }
  double norm() const;
  bool normalized() const;
  StateVector normalized_copy() const;
  HermitianOp projector() const { return HermitianOp::projector(amplitudes); }
};

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b);
cplx inner(const StateVector& a, const StateVector& b);
StateVector kron(const StateVector& a, const StateVector& b);
StateVector basis_state(std::size_t dim, std::size_t k);

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // orthonormal columns
};

Eigensystem hermitian_eig(const HermitianOp& h);
Eigensystem hermitian_eig(const ComplexMatrix& m);

double trace_norm(const HermitianOp& h);
double trace_norm(const ComplexMatrix& m);
double trace_distance(const HermitianOp& rho, const HermitianOp& sigma);
double fidelity(const HermitianOp& rho, const HermitianOp& sigma);
HermitianOp partial_trace(const HermitianOp& m, const std::vector<std::size_t>& dims,
                          const std::vector<std::size_t>& keep);
double operator_norm(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOp kron(const HermitianOp& a, const HermitianOp& b);
HermitianOp psd_sqrt(const HermitianOp& h);
double min_eigenvalue(const HermitianOp& h);
double max_eigenvalue(const HermitianOp& h);

// Eigenvalues >= -kPsdTol are clamped to zero; below that the operator is rejected.
constexpr double kPsdTol = 1e-10;

}  // namespace obcast
