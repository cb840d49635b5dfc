#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "error.hpp"

namespace obcast {

namespace {

void require_finite(const std::vector<cplx>& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorCode::InvalidInput, "matrix entry is not finite");
    }
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::InvalidInput, "matrix shape mismatch");
  }
}

// Eigenvalue magnitude treated as numerical zero for an operator with the given spectral scale.
double zero_threshold(const std::vector<double>& values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0) *
         static_cast<double>(std::max<std::size_t>(values.size(), 1));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) fail(ErrorCode::InvalidInput, "entry count != rows * cols");
  require_finite(data_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::InvalidInput, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::outer(const std::vector<cplx>& ket, const std::vector<cplx>& bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<cplx>& v) { return {v.size(), 1, v}; }

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  }
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double s = 0.0;
  for (const auto& z : data_) s = std::max(s, std::abs(z));
  return s;
}

std::vector<cplx> ComplexMatrix::col(std::size_t c) const {
  std::vector<cplx> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& v) const {
  if (v.size() != cols_) fail(ErrorCode::InvalidInput, "matrix-vector dimension mismatch");
  std::vector<cplx> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::InvalidInput, "matrix product dimension mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

HermitianOp::HermitianOp(const ComplexMatrix& m) {
  if (!m.square()) fail(ErrorCode::InvalidInput, "Hermitian operator must be square");
  const std::size_t n = m.rows();
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(m(i, j) - std::conj(m(j, i))));
  }
  if (residual > kHermTol) {
    fail(ErrorCode::InvalidInput, "operator is not Hermitian (residual " + std::to_string(residual) + ")");
  }
  m_ = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianOp HermitianOp::projector(const std::vector<cplx>& ket) {
  return HermitianOp(ComplexMatrix::outer(ket, ket));
}

HermitianOp HermitianOp::operator+(const HermitianOp& o) const { return HermitianOp(m_ + o.m_); }
HermitianOp HermitianOp::operator-(const HermitianOp& o) const { return HermitianOp(m_ - o.m_); }
HermitianOp HermitianOp::scaled(double s) const { return HermitianOp(cplx(s) * m_); }

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return std::sqrt(s);
}

bool StateVector::normalized() const { return std::abs(norm() - 1.0) <= 1e-12; }

StateVector StateVector::normalized_copy() const {
  const double n = norm();
  if (n == 0.0) fail(ErrorCode::InvalidInput, "cannot normalize the zero vector");
  StateVector out = *this;
  for (auto& z : out.amplitudes) z /= n;
  return out;
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidInput, "inner product dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

cplx inner(const StateVector& a, const StateVector& b) { return inner(a.amplitudes, b.amplitudes); }

StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<cplx> v;
  v.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes) {
    for (const auto& y : b.amplitudes) v.push_back(x * y);
  }
  return StateVector(std::move(v));
}

StateVector basis_state(std::size_t dim, std::size_t k) {
  if (k >= dim) fail(ErrorCode::InvalidInput, "basis index out of range");
  std::vector<cplx> v(dim, 0.0);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

Eigensystem hermitian_eig(const HermitianOp& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius(), std::numeric_limits<double>::min());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double b = std::abs(apq);
        if (b <= 1e-300) continue;
        const cplx w = apq / b;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Plane unitary U = D J with D = diag(1, conj(w)) on (p, q).
        const cplx upp = c, upq = s, uqp = -s * std::conj(w), uqq = c * std::conj(w);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  Eigensystem es;
  es.values.resize(n);
  es.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

Eigensystem hermitian_eig(const ComplexMatrix& m) { return hermitian_eig(HermitianOp(m)); }

double trace_norm(const HermitianOp& h) {
  double s = 0.0;
  for (double v : hermitian_eig(h).values) s += std::abs(v);
  return s;
}

double trace_norm(const ComplexMatrix& m) {
  const auto es = hermitian_eig(HermitianOp(m.adjoint() * m));
  const double thr = zero_threshold(es.values);
  double s = 0.0;
  for (double v : es.values) {
    if (v > thr) s += std::sqrt(v);
  }
  return s;
}

double trace_distance(const HermitianOp& rho, const HermitianOp& sigma) {
  if (rho.dim() != sigma.dim()) fail(ErrorCode::InvalidInput, "trace_distance dimension mismatch");
  return 0.5 * trace_norm(rho - sigma);
}

namespace {

ComplexMatrix spectral_apply(const Eigensystem& es, const std::vector<double>& f) {
  const std::size_t n = es.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = es.vectors(i, k) * f[k];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

std::vector<double> clamped_sqrt(const std::vector<double>& values) {
  const double thr = zero_threshold(values);
  std::vector<double> f(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < -kPsdTol) {
      fail(ErrorCode::InvalidInput, "operator is not positive semidefinite (eigenvalue " +
                                        std::to_string(values[k]) + ")");
    }
    f[k] = values[k] > thr ? std::sqrt(values[k]) : 0.0;
  }
  return f;
}

}  // namespace

HermitianOp psd_sqrt(const HermitianOp& h) {
  const auto es = hermitian_eig(h);
  return HermitianOp(spectral_apply(es, clamped_sqrt(es.values)));
}

double fidelity(const HermitianOp& rho, const HermitianOp& sigma) {
  if (rho.dim() != sigma.dim()) fail(ErrorCode::InvalidInput, "fidelity dimension mismatch");
  clamped_sqrt(hermitian_eig(sigma).values);  // rejects a non-PSD sigma
  const ComplexMatrix sr = psd_sqrt(rho).matrix();
  const HermitianOp inner_op(sr * sigma.matrix() * sr);
  double f = 0.0;
  for (double v : clamped_sqrt(hermitian_eig(inner_op).values)) f += v;
  return f;
}

HermitianOp partial_trace(const HermitianOp& m, const std::vector<std::size_t>& dims,
                          const std::vector<std::size_t>& keep) {
  if (keep.empty()) fail(ErrorCode::InvalidInput, "partial_trace: empty keep set");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) fail(ErrorCode::InvalidInput, "partial_trace: zero factor dimension");
    total *= d;
  }
  if (total != m.dim()) fail(ErrorCode::InvalidInput, "partial_trace: dims do not multiply to dim(M)");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) fail(ErrorCode::InvalidInput, "partial_trace: keep index out of range");
    kept[k] = true;
  }

  const std::size_t nf = dims.size();
  std::size_t dk = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    if (kept[f]) dk *= dims[f];
  }
  // For each full index, split into (kept index, traced index).
  std::vector<std::size_t> kidx(total), tidx(total);
  std::vector<std::size_t> digits(nf);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t f = nf; f-- > 0;) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t ki = 0, ti = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      if (kept[f]) {
        ki = ki * dims[f] + digits[f];
      } else {
        ti = ti * dims[f] + digits[f];
      }
    }
    kidx[idx] = ki;
    tidx[idx] = ti;
  }
  ComplexMatrix out(dk, dk);
  const ComplexMatrix& a = m.matrix();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += a(i, j);
    }
  }
  return HermitianOp(out);
}

double operator_norm(const ComplexMatrix& m) {
  const auto es = hermitian_eig(HermitianOp(m.adjoint() * m));
  return std::sqrt(std::max(es.values.back(), 0.0));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
      }
    }
  }
  return m;
}

HermitianOp kron(const HermitianOp& a, const HermitianOp& b) { return HermitianOp(kron(a.matrix(), b.matrix())); }

double min_eigenvalue(const HermitianOp& h) { return hermitian_eig(h).values.front(); }
double max_eigenvalue(const HermitianOp& h) { return hermitian_eig(h).values.back(); }

}  // namespace obcast
