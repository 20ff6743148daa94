#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace floqept::numerics {

using cplx = std::complex<double>;
using ComplexVec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Dense row-major complex matrix.
class ComplexMat {
 public:
  ComplexMat() = default;
  ComplexMat(std::size_t rows, std::size_t cols);
  ComplexMat(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMat adjoint() const;
  ComplexMat conjugate() const;
  ComplexMat transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  // Largest absolute entry.
  double max_abs() const;

  ComplexVec apply(std::span<const cplx> v) const;

  ComplexMat& operator+=(const ComplexMat& o);
  ComplexMat& operator-=(const ComplexMat& o);
  ComplexMat& operator*=(cplx s);

  friend ComplexMat operator+(ComplexMat a, const ComplexMat& b) { return a += b; }
  friend ComplexMat operator-(ComplexMat a, const ComplexMat& b) { return a -= b; }
  friend ComplexMat operator*(ComplexMat a, cplx s) { return a *= s; }
  friend ComplexMat operator*(cplx s, ComplexMat a) { return a *= s; }
  friend ComplexMat operator*(const ComplexMat& a, const ComplexMat& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

double norm2(std::span<const cplx> v);

// Determinant by LU with partial pivoting.
cplx determinant(const ComplexMat& a);

// Solves a * x = b by LU with partial pivoting. Throws Error(numerical) when a
// pivot falls below singular_tol * max|a|.
ComplexVec lu_solve(ComplexMat a, ComplexVec b, double singular_tol = 1e-14);

}  // namespace floqept::numerics
