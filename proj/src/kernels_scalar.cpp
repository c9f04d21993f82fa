#include "spinsim/kernels.hpp"

// Reference kernels. Deliberately plain loops over std::complex so the vector
// variants have an unambiguous semantic baseline to be tested against.
namespace spinsim::kernels {
namespace {

void matvec_scalar(const cplx* A, const cplx* x, cplx* y, int n) {
  for (int i = 0; i < n; ++i) {
    const cplx* row = A + (size_t)i * n;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) acc += row[k] * x[k];
    y[i] = acc;
  }
}

void matmul_scalar(const cplx* A, const cplx* B, cplx* C, int n) {
  // i-k-j order: row of C updated by row of B, contiguous on the inner index.
  for (int i = 0; i < n; ++i) {
    cplx* crow = C + (size_t)i * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx aik = A[(size_t)i * n + k];
      if (aik == cplx(0.0)) continue;
      const cplx* brow = B + (size_t)k * n;
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_scalar(const cplx* x, const cplx* y, int n) {
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", matvec_scalar, matmul_scalar, axpy_scalar,
                       dotc_scalar};
  return ops;
}

}  // namespace spinsim::kernels
