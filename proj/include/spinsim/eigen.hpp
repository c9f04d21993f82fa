#pragma once
#include "spinsim/complex_matrix.hpp"

#include <vector>

namespace spinsim {

// Eigendecomposition of a complex Hermitian matrix. Eigenvalues ascending;
// eigenvectors.column(i) belongs to eigenvalues[i]; columns orthonormal.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  CMat eigenvectors;

  CVec column(int i) const {
    CVec v(eigenvectors.n);
    for (int r = 0; r < eigenvectors.n; ++r) v[r] = eigenvectors(r, i);
    return v;
  }
};

// Cyclic Jacobi rotations on the full complex Hermitian matrix. Converges to
// off-diagonal Frobenius norm <= 1e-13 * ||A||_F (at most 100 sweeps); the
// input is rejected if its Hermitian defect exceeds 1e-12 * max(1, |A|_max).
// Eigenvector phases are fixed deterministically (largest-magnitude component
// made real positive).
EigenDecomposition hermitian_eig(const CMat& A);

// exp(-i H dt) through the eigendecomposition of Hermitian H: exact up to the
// eigensolver's accuracy, hence unconditionally unitary. dt in seconds when H
// is in rad/s; for dimensionless generators dt is the rotation angle.
CMat unitary_step(const CMat& H, double dt);

}  // namespace spinsim
