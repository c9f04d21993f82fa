#include "doctest.h"
#include "spinsim/eigen.hpp"
#include "spinsim/errors.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace spinsim;

TEST_CASE("hermitian_eig: reconstruction and orthonormality") {
  for (int n : {2, 5, 16, 32}) {
    const CMat A = th::random_hermitian(n, 3.0);
    const EigenDecomposition ed = hermitian_eig(A);

    REQUIRE(static_cast<int>(ed.eigenvalues.size()) == n);
    CHECK(std::is_sorted(ed.eigenvalues.begin(), ed.eigenvalues.end()));

    // V^dag V = I
    const CMat vtv = matmul(dagger(ed.eigenvectors), ed.eigenvectors);
    CMat I = CMat::identity(n);
    CHECK(max_abs(sub(vtv, I)) < 1e-12);

    // A = V diag(lambda) V^dag
    CMat lam(n);
    for (int i = 0; i < n; ++i) lam(i, i) = ed.eigenvalues[static_cast<size_t>(i)];
    const CMat rec = matmul(ed.eigenvectors, matmul(lam, dagger(ed.eigenvectors)));
    CHECK(max_abs(sub(rec, A)) < 1e-10 * std::max(1.0, fro_norm(A)));
  }
}

TEST_CASE("hermitian_eig: known spectra") {
  // identity
  const CMat I = CMat::identity(8);
  const EigenDecomposition ei = hermitian_eig(I);
  for (double l : ei.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-14));

  // diagonal with repeats (degenerate block)
  CMat D(4);
  D(0, 0) = 2.0;
  D(1, 1) = -1.0;
  D(2, 2) = 2.0;
  D(3, 3) = 0.0;
  const EigenDecomposition edd = hermitian_eig(D);
  CHECK(edd.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(edd.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(edd.eigenvalues[2] == doctest::Approx(2.0));
  CHECK(edd.eigenvalues[3] == doctest::Approx(2.0));
  const CMat vtv = matmul(dagger(edd.eigenvectors), edd.eigenvectors);
  CHECK(max_abs(sub(vtv, CMat::identity(4))) < 1e-12);

  // 2x2 with a complex off-diagonal: eigenvalues a +- |b|
  CMat B(2);
  B(0, 0) = 1.0;
  B(1, 1) = 1.0;
  B(0, 1) = cplx(0.6, -0.8);
  B(1, 0) = cplx(0.6, 0.8);
  const EigenDecomposition eb = hermitian_eig(B);
  CHECK(eb.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eb.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  CMat A(3);
  A(0, 1) = 1.0;  // A(1,0) left zero
  CHECK_THROWS_AS(hermitian_eig(A), NumericalError);
}

TEST_CASE("unitary_step: group properties and exactness") {
  const CMat H = th::random_hermitian(12, 2.0);
  const CMat U = unitary_step(H, 0.37);
  CHECK(unitary_defect(U) < 1e-12);

  // inverse by negative time
  const CMat Ui = unitary_step(H, -0.37);
  CHECK(max_abs(sub(matmul(U, Ui), CMat::identity(12))) < 1e-12);

  // composition
  const CMat U2 = unitary_step(H, 0.74);
  CHECK(max_abs(sub(matmul(U, U), U2)) < 1e-11);

  // eigenphases: for diagonal H the step is elementwise
  CMat D(3);
  D(0, 0) = 1.0;
  D(1, 1) = 2.0;
  D(2, 2) = -0.5;
  const CMat Ud = unitary_step(D, 0.9);
  for (int i = 0; i < 3; ++i) {
    const cplx want = std::exp(cplx(0.0, -0.9 * std::real(D(i, i))));
    CHECK(std::abs(Ud(i, i) - want) < 1e-13);
  }
}
