#include "magweyl/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace magweyl::kernels {

namespace {

// Two interleaved complex<double> per __m256d lane: [re0 im0 re1 im1].

inline __m256d cmul(__m256d a, __m256d b) {
  __m256d arar = _mm256_movedup_pd(a);                  // [ar0 ar0 ar1 ar1]
  __m256d aiai = _mm256_permute_pd(a, 0xF);             // [ai0 ai0 ai1 ai1]
  __m256d bswp = _mm256_permute_pd(b, 0x5);             // [bi0 br0 bi1 br1]
  return _mm256_addsub_pd(_mm256_mul_pd(arar, b), _mm256_mul_pd(aiai, bswp));
}

inline cplx hsum(__m256d acc) {
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  return {t[0] + t[2], t[1] + t[3]};
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc = _mm256_add_pd(acc, cmul(va, vb));
  }
  cplx s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_xor_pd(_mm256_loadu_pd(pa + 2 * i), conj_mask);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc = _mm256_add_pd(acc, cmul(va, vb));
  }
  cplx s = hsum(acc);
  for (; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void axpy_avx2(cplx sc, const cplx* a, cplx* dst, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* pd = reinterpret_cast<double*>(dst);
  __m256d vs = _mm256_set_pd(sc.imag(), sc.real(), sc.imag(), sc.real());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vd = _mm256_loadu_pd(pd + 2 * i);
    _mm256_storeu_pd(pd + 2 * i, _mm256_add_pd(vd, cmul(vs, va)));
  }
  for (; i < n; ++i) dst[i] += sc * a[i];
}

void had_avx2(const cplx* a, const cplx* b, cplx* dst, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(pd + 2 * i, cmul(va, vb));
  }
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

cplx dot3_avx2(const cplx* a, const cplx* b, const cplx* c, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* pc = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d vc = _mm256_loadu_pd(pc + 2 * i);
    acc = _mm256_add_pd(acc, cmul(cmul(va, vb), vc));
  }
  cplx s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{dot_avx2, dotc_avx2, axpy_avx2, had_avx2, dot3_avx2};
  return ops;
}

}  // namespace magweyl::kernels

#else

namespace magweyl::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace magweyl::kernels

#endif
