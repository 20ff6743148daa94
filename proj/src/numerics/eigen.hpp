#pragma once

#include <vector>

#include "numerics/complex_matrix.hpp"

namespace floqept::numerics {

struct EigenPair {
  ComplexVec values;
  std::vector<ComplexVec> vectors;  // unit Euclidean norm, vectors[k] pairs with values[k]
};

// Eigen-decomposition of a square matrix of size <= 64. 2x2 inputs use the
// quadratic formula, larger ones eig_qr. Ordered by descending real part, ties
// (real parts within 1e-12 of the spectral scale) by descending imaginary part.
EigenPair eig_small(const ComplexMat& h);

// Hessenberg reduction plus shifted complex QR; usable for 2x2 as well.
EigenPair eig_qr(const ComplexMat& h);

// Applies the global ordering in place.
void sort_eigenpairs(EigenPair& pair);

// max_k ||H v_k - nu_k v_k||.
double eigen_residual(const ComplexMat& h, const EigenPair& pair);

// Unit null vector of the 2x2 matrix h - nu I; e_fallback when h - nu I vanishes.
ComplexVec eigenvector_2x2(const ComplexMat& h, cplx nu, std::size_t fallback);

// Roots of z^2 - trace z + det in the ordering convention, computed without
// cancellation in the smaller root.
std::pair<cplx, cplx> quadratic_eigenvalues(cplx trace, cplx det);

}  // namespace floqept::numerics
