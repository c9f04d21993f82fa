#include "spinsim/kernels.hpp"

// NEON kernels for aarch64: one complex<double> per 128-bit register, using
// fused multiply-accumulate on the interleaved representation. Mirrors the
// AVX2 file; covered by the same equivalence tests when built on ARM.
#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace spinsim::kernels {
namespace {

// a*b for one complex double: [ar ai]*[br bi]
inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  float64x2_t bre = vdupq_laneq_f64(b, 0);
  float64x2_t bim = vdupq_laneq_f64(b, 1);
  float64x2_t asw = vextq_f64(a, a, 1);                // [ai ar]
  float64x2_t t = vmulq_f64(asw, bim);                 // [ai*bi ar*bi]
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(t, sign), a, bre);        // [ar*br-ai*bi ai*br+ar*bi]
}

void matvec_neon(const cplx* A, const cplx* x, cplx* y, int n) {
  const double* xp = reinterpret_cast<const double*>(x);
  for (int i = 0; i < n; ++i) {
    const double* row = reinterpret_cast<const double*>(A + (size_t)i * n);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (int k = 0; k < n; ++k)
      acc = vaddq_f64(acc, cmul(vld1q_f64(row + 2 * k), vld1q_f64(xp + 2 * k)));
    double out[2];
    vst1q_f64(out, acc);
    y[i] = {out[0], out[1]};
  }
}

void matmul_neon(const cplx* A, const cplx* B, cplx* C, int n) {
  for (int i = 0; i < n; ++i) {
    double* crow = reinterpret_cast<double*>(C + (size_t)i * n);
    for (int j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx aik = A[(size_t)i * n + k];
      float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&aik));
      const double* brow = reinterpret_cast<const double*>(B + (size_t)k * n);
      for (int j = 0; j < n; ++j) {
        float64x2_t prod = cmul(av, vld1q_f64(brow + 2 * j));
        float64x2_t c = vld1q_f64(crow + 2 * j);
        vst1q_f64(crow + 2 * j, vaddq_f64(c, prod));
      }
    }
  }
}

void axpy_neon(cplx a, const cplx* x, cplx* y, int n) {
  float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&a));
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  for (int i = 0; i < n; ++i) {
    float64x2_t prod = cmul(av, vld1q_f64(xp + 2 * i));
    vst1q_f64(yp + 2 * i, vaddq_f64(vld1q_f64(yp + 2 * i), prod));
  }
}

cplx dotc_neon(const cplx* x, const cplx* y, int n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  float64x2_t acc = vdupq_n_f64(0.0);
  const float64x2_t sign = {1.0, -1.0};
  for (int i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(xp + 2 * i);              // [xr xi]
    float64x2_t xc = vmulq_f64(xv, sign);                // conj
    acc = vaddq_f64(acc, cmul(xc, vld1q_f64(yp + 2 * i)));
  }
  double out[2];
  vst1q_f64(out, acc);
  return {out[0], out[1]};
}

}  // namespace

const Ops* neon_ops() {
  static const Ops ops{"neon", matvec_neon, matmul_neon, axpy_neon, dotc_neon};
  return &ops;
}

}  // namespace spinsim::kernels

#else

namespace spinsim::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace spinsim::kernels

#endif
