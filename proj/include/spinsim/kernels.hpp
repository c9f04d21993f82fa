#pragma once
#include <complex>

// Dense complex kernels behind the propagation and transform hot loops.
// A scalar reference implementation always exists; vector variants (AVX2 on
// x86-64, NEON on aarch64) are selected at runtime from CPU capabilities and
// must agree with the reference to a few ulps (tests/test_kernels.cpp).
namespace spinsim::kernels {

using cplx = std::complex<double>;

struct Ops {
  const char* name;
  // y = A x          A: n x n row-major; y must not alias x
  void (*matvec)(const cplx* A, const cplx* x, cplx* y, int n);
  // C = A B          all n x n row-major; C must not alias A or B
  void (*matmul)(const cplx* A, const cplx* B, cplx* C, int n);
  // y += a x
  void (*axpy)(cplx a, const cplx* x, cplx* y, int n);
  // sum_i conj(x_i) y_i
  cplx (*dotc)(const cplx* x, const cplx* y, int n);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when not compiled for this target
const Ops* neon_ops();  // nullptr when not compiled for this target

// Currently active backend (best runtime-supported variant by default).
const Ops& active();

// Force a backend by name: "scalar", "avx2", "neon", or "auto". Returns false
// (and leaves the selection unchanged) if the request cannot be satisfied.
// Not safe to call concurrently with running kernels; meant for tests.
bool force_backend(const char* name);

}  // namespace spinsim::kernels
