#pragma once
#include "spinsim/kernels.hpp"

#include <vector>

// Dense complex matrices and vectors over the 2^N product basis, plus the
// small set of operations the simulator needs. Values are plain data and all
// functions are pure; heavy products route through the dispatched kernels.
namespace spinsim {

using cplx = kernels::cplx;
using CVec = std::vector<cplx>;

struct CMat {
  int n = 0;
  std::vector<cplx> a;  // row-major, a[i*n + j]

  CMat() = default;
  explicit CMat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}

  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const cplx& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * n + j];
  }

  static CMat identity(int n);
};

CMat dagger(const CMat& A);
CMat matmul(const CMat& A, const CMat& B);
CVec matvec(const CMat& A, const CVec& x);
void matvec(const CMat& A, const CVec& x, CVec& y);  // y = A x, y resized
void add_scaled(CMat& A, const CMat& B, cplx s);  // A += s*B
CMat scaled(const CMat& A, cplx s);
CMat add(const CMat& A, const CMat& B);
CMat sub(const CMat& A, const CMat& B);
CMat commutator(const CMat& A, const CMat& B);  // AB - BA
CMat outer(const CVec& x, const CVec& y);       // |x><y|

cplx trace(const CMat& A);
double max_abs(const CMat& A);
double fro_norm(const CMat& A);
double inf_norm(const CMat& A);        // max row sum of |a_ij|
double herm_defect(const CMat& A);     // max |A - A^dagger| entry
double unitary_defect(const CMat& U);  // max |U^dagger U - I| entry

cplx dotc(const CVec& x, const CVec& y);  // sum conj(x_i) y_i
double norm2(const CVec& x);
void normalize(CVec& x);

// <x|A|x> for Hermitian A (real part returned; imaginary part is roundoff)
double expval(const CMat& A, const CVec& x);

}  // namespace spinsim
