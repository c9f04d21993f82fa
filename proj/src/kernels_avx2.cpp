#include "spinsim/kernels.hpp"

// AVX2+FMA kernels for interleaved complex<double>. Two complex numbers per
// 256-bit register; products use the fmaddsub idiom:
//   (ar+i.ai)(br+i.bi): even lane ar*br - ai*bi, odd lane ar*bi + ai*br.
// This TU is compiled with -mavx2 -mfma on x86-64 only; dispatch decides at
// runtime whether these entry points are used.
#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace spinsim::kernels {
namespace {

// a*b for two packed complex doubles per register
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d bre = _mm256_movedup_pd(b);        // [br0 br0 br1 br1]
  __m256d bim = _mm256_permute_pd(b, 0xF);   // [bi0 bi0 bi1 bi1]
  __m256d asw = _mm256_permute_pd(a, 0x5);   // [ai0 ar0 ai1 ar1]
  __m256d t = _mm256_mul_pd(asw, bim);
  return _mm256_fmaddsub_pd(a, bre, t);
}

// acc += a*b
inline __m256d cfma(__m256d acc, __m256d a, __m256d b) {
  return _mm256_add_pd(acc, cmul(a, b));
}

inline cplx reduce2(__m256d v) {
  // [re0 im0 re1 im1] -> (re0+re1, im0+im1)
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

void matvec_avx2(const cplx* A, const cplx* x, cplx* y, int n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const int n2 = n & ~1;
  for (int i = 0; i < n; ++i) {
    const double* row = reinterpret_cast<const double*>(A + (size_t)i * n);
    __m256d acc = _mm256_setzero_pd();
    int k = 0;
    for (; k < n2; k += 2)
      acc = cfma(acc, _mm256_loadu_pd(row + 2 * k), _mm256_loadu_pd(xp + 2 * k));
    cplx tail = 0.0;
    for (; k < n; ++k) tail += A[(size_t)i * n + k] * x[k];
    y[i] = reduce2(acc) + tail;
  }
}

void matmul_avx2(const cplx* A, const cplx* B, cplx* C, int n) {
  const int n2 = n & ~1;
  for (int i = 0; i < n; ++i) {
    double* crow = reinterpret_cast<double*>(C + (size_t)i * n);
    for (int j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx aik = A[(size_t)i * n + k];
      const __m256d are = _mm256_set1_pd(aik.real());
      const __m256d aim = _mm256_set1_pd(aik.imag());
      const double* brow = reinterpret_cast<const double*>(B + (size_t)k * n);
      int j = 0;
      for (; j < n2; j += 2) {
        __m256d b = _mm256_loadu_pd(brow + 2 * j);
        __m256d bsw = _mm256_permute_pd(b, 0x5);
        __m256d t = _mm256_mul_pd(bsw, aim);
        __m256d prod = _mm256_fmaddsub_pd(b, are, t);
        __m256d c = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(c, prod));
      }
      for (; j < n; ++j)
        C[(size_t)i * n + j] += aik * B[(size_t)k * n + j];
    }
  }
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, int n) {
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const int n2 = n & ~1;
  int i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d xsw = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(xsw, aim);
    __m256d prod = _mm256_fmaddsub_pd(xv, are, t);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_avx2(const cplx* x, const cplx* y, int n) {
  // conj(x)*y: even lane xr*yr + xi*yi, odd lane xr*yi - xi*yr  (fmsubadd)
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  const int n2 = n & ~1;
  int i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    __m256d xre = _mm256_movedup_pd(xv);
    __m256d xim = _mm256_permute_pd(xv, 0xF);
    __m256d ysw = _mm256_permute_pd(yv, 0x5);
    __m256d t = _mm256_mul_pd(ysw, xim);
    acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(yv, xre, t));
  }
  cplx tail = 0.0;
  for (; i < n; ++i) tail += std::conj(x[i]) * y[i];
  return reduce2(acc) + tail;
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops{"avx2", matvec_avx2, matmul_avx2, axpy_avx2, dotc_avx2};
  return &ops;
}

}  // namespace spinsim::kernels

#else

namespace spinsim::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace spinsim::kernels

#endif
