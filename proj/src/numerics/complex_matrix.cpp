#include "numerics/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace floqept::numerics {

ComplexMat::ComplexMat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMat::ComplexMat(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::invalid_argument, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMat ComplexMat::identity(std::size_t n) {
  ComplexMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMat ComplexMat::adjoint() const {
  ComplexMat m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMat ComplexMat::conjugate() const {
  ComplexMat m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

ComplexMat ComplexMat::transpose() const {
  ComplexMat m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

cplx ComplexMat::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMat::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMat::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexVec ComplexMat::apply(std::span<const cplx> v) const {
  if (v.size() != cols_) fail(ErrorKind::invalid_argument, "matrix-vector size mismatch");
  ComplexVec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexMat& ComplexMat::operator+=(const ComplexMat& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) fail(ErrorKind::invalid_argument, "size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMat& ComplexMat::operator-=(const ComplexMat& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) fail(ErrorKind::invalid_argument, "size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMat& ComplexMat::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMat operator*(const ComplexMat& a, const ComplexMat& b) {
  if (a.cols_ != b.rows_) fail(ErrorKind::invalid_argument, "matrix product size mismatch");
  ComplexMat m(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx ark = a(r, k);
      if (ark == cplx{}) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

// In-place LU with partial pivoting; returns permutation parity, or 0 when a
// zero pivot is met.
int lu_inplace(ComplexMat& a, std::vector<std::size_t>& perm, double tiny) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int parity = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      double v = std::abs(a(r, k));
      if (v > best) best = v, p = r;
    }
    if (best <= tiny) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      std::swap(perm[k], perm[p]);
      parity = -parity;
    }
    const cplx inv = 1.0 / a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const cplx f = a(r, k) * inv;
      if (f == cplx{}) continue;
      a(r, k) = f;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return parity;
}

}  // namespace

cplx determinant(const ComplexMat& m) {
  if (!m.square()) fail(ErrorKind::invalid_argument, "determinant of non-square matrix");
  ComplexMat a = m;
  std::vector<std::size_t> perm;
  int parity = lu_inplace(a, perm, 0.0);
  if (parity == 0) return 0.0;
  cplx d = static_cast<double>(parity);
  for (std::size_t i = 0; i < a.rows(); ++i) d *= a(i, i);
  return d;
}

ComplexVec lu_solve(ComplexMat a, ComplexVec b, double singular_tol) {
  const std::size_t n = a.rows();
  if (!a.square() || b.size() != n) fail(ErrorKind::invalid_argument, "lu_solve size mismatch");
  std::vector<std::size_t> perm;
  const double tiny = singular_tol * a.max_abs();
  if (lu_inplace(a, perm, tiny) == 0)
    fail(ErrorKind::numerical, "singular linear system (pivot below tolerance)");
  ComplexVec x(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= a(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace floqept::numerics
