#include "spinsim/complex_matrix.hpp"

#include <cmath>

namespace spinsim {

CMat CMat::identity(int n) {
  CMat I(n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

CMat dagger(const CMat& A) {
  CMat B(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) B(j, i) = std::conj(A(i, j));
  return B;
}

CMat matmul(const CMat& A, const CMat& B) {
  CMat C(A.n);
  kernels::active().matmul(A.a.data(), B.a.data(), C.a.data(), A.n);
  return C;
}

CVec matvec(const CMat& A, const CVec& x) {
  CVec y(A.n);
  kernels::active().matvec(A.a.data(), x.data(), y.data(), A.n);
  return y;
}

void matvec(const CMat& A, const CVec& x, CVec& y) {
  y.resize(static_cast<size_t>(A.n));
  kernels::active().matvec(A.a.data(), x.data(), y.data(), A.n);
}

void add_scaled(CMat& A, const CMat& B, cplx s) {
  kernels::active().axpy(s, B.a.data(), A.a.data(),
                         static_cast<int>(B.a.size()));
}

CMat scaled(const CMat& A, cplx s) {
  CMat B(A.n);
  add_scaled(B, A, s);
  return B;
}

CMat add(const CMat& A, const CMat& B) {
  CMat C = A;
  add_scaled(C, B, 1.0);
  return C;
}

CMat sub(const CMat& A, const CMat& B) {
  CMat C = A;
  add_scaled(C, B, -1.0);
  return C;
}

CMat commutator(const CMat& A, const CMat& B) {
  return sub(matmul(A, B), matmul(B, A));
}

CMat outer(const CVec& x, const CVec& y) {
  CMat A(static_cast<int>(x.size()));
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) A(i, j) = x[i] * std::conj(y[j]);
  return A;
}

cplx trace(const CMat& A) {
  cplx t = 0.0;
  for (int i = 0; i < A.n; ++i) t += A(i, i);
  return t;
}

double max_abs(const CMat& A) {
  double m = 0.0;
  for (const cplx& v : A.a) m = std::max(m, std::abs(v));
  return m;
}

double fro_norm(const CMat& A) {
  double s = 0.0;
  for (const cplx& v : A.a) s += std::norm(v);
  return std::sqrt(s);
}

double inf_norm(const CMat& A) {
  double m = 0.0;
  for (int i = 0; i < A.n; ++i) {
    double r = 0.0;
    for (int j = 0; j < A.n; ++j) r += std::abs(A(i, j));
    m = std::max(m, r);
  }
  return m;
}

double herm_defect(const CMat& A) {
  double m = 0.0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j <= i; ++j)
      m = std::max(m, std::abs(A(i, j) - std::conj(A(j, i))));
  return m;
}

double unitary_defect(const CMat& U) {
  CMat G = matmul(dagger(U), U);
  for (int i = 0; i < G.n; ++i) G(i, i) -= 1.0;
  return max_abs(G);
}

cplx dotc(const CVec& x, const CVec& y) {
  return kernels::active().dotc(x.data(), y.data(), static_cast<int>(x.size()));
}

double norm2(const CVec& x) { return std::sqrt(std::real(dotc(x, x))); }

void normalize(CVec& x) {
  double nrm = norm2(x);
  if (nrm == 0.0) return;
  for (cplx& v : x) v /= nrm;
}

double expval(const CMat& A, const CVec& x) {
  CVec y = matvec(A, x);
  return std::real(dotc(x, y));
}

}  // namespace spinsim
