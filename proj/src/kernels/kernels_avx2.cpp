// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime cpuid check (see dispatch.cpp).

#include "flor/kernels/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace flor::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

void axpy_avx2(double* dst, const double* src, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(av, s, d));
  }
  for (; i < n; ++i) dst[i] += a * src[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double ssd_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void lift_dot_avx2(const double* gx, const double* gy, const double* gz,
                   double vx, double vy, double vz, double* out,
                   std::size_t n) {
  const __m256d vxv = _mm256_set1_pd(vx);
  const __m256d vyv = _mm256_set1_pd(vy);
  const __m256d vzv = _mm256_set1_pd(vz);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(gx + i), vxv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(gy + i), vyv, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(gz + i), vzv, acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = gx[i] * vx + gy[i] * vy + gz[i] * vz;
}

void tricubic_vg_avx2(const double* base, std::ptrdiff_t sy, std::ptrdiff_t sz,
                      const double* wx, const double* dwx, const double* wy,
                      const double* dwy, const double* wz, const double* dwz,
                      double out[4]) {
  const __m256d wxv = _mm256_loadu_pd(wx);
  const __m256d dwxv = _mm256_loadu_pd(dwx);
  __m256d accv = _mm256_setzero_pd();
  __m256d accx = _mm256_setzero_pd();
  __m256d accy = _mm256_setzero_pd();
  __m256d accz = _mm256_setzero_pd();
  for (int k = 0; k < 4; ++k) {
    const double* slice = base + k * sz;
    for (int j = 0; j < 4; ++j) {
      const __m256d r = _mm256_loadu_pd(slice + j * sy);
      const __m256d t = _mm256_mul_pd(r, wxv);
      const __m256d tx = _mm256_mul_pd(r, dwxv);
      accv = _mm256_fmadd_pd(t, _mm256_set1_pd(wy[j] * wz[k]), accv);
      accy = _mm256_fmadd_pd(t, _mm256_set1_pd(dwy[j] * wz[k]), accy);
      accz = _mm256_fmadd_pd(t, _mm256_set1_pd(wy[j] * dwz[k]), accz);
      accx = _mm256_fmadd_pd(tx, _mm256_set1_pd(wy[j] * wz[k]), accx);
    }
  }
  out[0] = hsum(accv);
  out[1] = hsum(accx);
  out[2] = hsum(accy);
  out[3] = hsum(accz);
}

double tricubic_v_avx2(const double* base, std::ptrdiff_t sy,
                       std::ptrdiff_t sz, const double* wx, const double* wy,
                       const double* wz) {
  const __m256d wxv = _mm256_loadu_pd(wx);
  __m256d accv = _mm256_setzero_pd();
  for (int k = 0; k < 4; ++k) {
    const double* slice = base + k * sz;
    for (int j = 0; j < 4; ++j) {
      const __m256d r = _mm256_loadu_pd(slice + j * sy);
      accv = _mm256_fmadd_pd(_mm256_mul_pd(r, wxv),
                             _mm256_set1_pd(wy[j] * wz[k]), accv);
    }
  }
  return hsum(accv);
}

}  // namespace

const KernelTable& avx2_kernels_impl() {
  static const KernelTable table = {
      "avx2",          axpy_avx2,        dot_avx2,
      sum_avx2,        ssd_avx2,         lift_dot_avx2,
      tricubic_vg_avx2, tricubic_v_avx2,
  };
  return table;
}

}  // namespace flor::kernels

#endif  // x86-64
