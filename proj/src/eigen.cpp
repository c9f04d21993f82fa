#include "spinsim/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinsim/errors.hpp"

namespace spinsim {
namespace {

// Sum of |a_ij|^2 over the strict upper triangle.
double offdiag_norm2(const CMat& A) {
  double s = 0.0;
  for (int i = 0; i < A.n; ++i)
    for (int j = i + 1; j < A.n; ++j) s += std::norm(A(i, j));
  return s;
}

}  // namespace

EigenDecomposition hermitian_eig(const CMat& A) {
  const int n = A.n;
  const double scale = std::max(1.0, max_abs(A));
  if (herm_defect(A) > 1e-12 * scale)
    throw NumericalError("hermitian_eig: input is not Hermitian to tolerance");

  CMat W = A;
  // Symmetrize exactly so roundoff in the caller cannot bias the rotations.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      cplx m = 0.5 * (W(i, j) + std::conj(W(j, i)));
      W(i, j) = m;
      W(j, i) = std::conj(m);
    }
    W(i, i) = std::real(W(i, i));
  }

  CMat V = CMat::identity(n);
  const double frob = std::max(fro_norm(W), 1e-300);
  const double stop2 = 1e-26 * frob * frob;  // off-norm <= 1e-13 * ||A||_F

  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm2(W) <= stop2) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = W(p, q);
        const double h = std::abs(apq);
        if (h == 0.0) continue;
        // Unitary 2x2 rotation R = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
        // with apq = h e^{i phi}; small-angle branch for quadratic convergence.
        const cplx eiphi = apq / h;
        const double app = std::real(W(p, p));
        const double aqq = std::real(W(q, q));
        const double tau = (app - aqq) / (2.0 * h);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx w = s * eiphi;          // complex "sine"
        const cplx wc = std::conj(w);

        // Columns p,q of W: W <- W R
        for (int r = 0; r < n; ++r) {
          const cplx wrp = W(r, p), wrq = W(r, q);
          W(r, p) = c * wrp + wc * wrq;
          W(r, q) = -w * wrp + c * wrq;
        }
        // Rows p,q of W: W <- R^dagger W
        for (int r = 0; r < n; ++r) {
          const cplx wpr = W(p, r), wqr = W(q, r);
          W(p, r) = c * wpr + w * wqr;
          W(q, r) = -wc * wpr + c * wqr;
        }
        W(p, q) = 0.0;
        W(q, p) = 0.0;
        W(p, p) = std::real(W(p, p));
        W(q, q) = std::real(W(q, q));

        // Accumulate eigenvectors: V <- V R
        for (int r = 0; r < n; ++r) {
          const cplx vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp + wc * vrq;
          V(r, q) = -w * vrp + c * vrq;
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag_norm2(W) > stop2)
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");

  // Sort ascending and fix each eigenvector's phase deterministically.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> evals(n);
  for (int i = 0; i < n; ++i) evals[i] = std::real(W(i, i));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return evals[a] < evals[b]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMat(n);
  for (int i = 0; i < n; ++i) {
    const int src = order[i];
    out.eigenvalues[i] = evals[src];
    int rmax = 0;
    double amax = -1.0;
    for (int r = 0; r < n; ++r) {
      double av = std::abs(V(r, src));
      if (av > amax) {
        amax = av;
        rmax = r;
      }
    }
    cplx ph = V(rmax, src);
    ph = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : cplx(1.0);
    for (int r = 0; r < n; ++r) out.eigenvectors(r, i) = V(r, src) * ph;
  }
  return out;
}

CMat unitary_step(const CMat& H, double dt) {
  EigenDecomposition ed = hermitian_eig(H);
  const int n = H.n;
  // U = V diag(e^{-i lambda dt}) V^dagger
  CMat D(n);
  for (int i = 0; i < n; ++i) {
    const double ang = -ed.eigenvalues[i] * dt;
    D(i, i) = cplx(std::cos(ang), std::sin(ang));
  }
  CMat VD = matmul(ed.eigenvectors, D);
  return matmul(VD, dagger(ed.eigenvectors));
}

}  // namespace spinsim
