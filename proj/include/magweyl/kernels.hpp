#ifndef MAGWEYL_KERNELS_HPP
#define MAGWEYL_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

// Low-level data-parallel kernels for the oscillatory-sum inner loops.
// Scalar reference implementations live in kernels_scalar.cpp; AVX2
// variants in kernels_avx2.cpp. The active implementation is chosen once
// at startup from CPUID and can be overridden for testing.

namespace magweyl::kernels {

using cplx = std::complex<double>;

struct Ops {
  // sum_i a[i] * b[i]  (bilinear, no conjugation)
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i conj(a[i]) * b[i]
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
  // dst[i] += s * a[i]
  void (*axpy)(cplx s, const cplx* a, cplx* dst, std::size_t n);
  // dst[i] = a[i] * b[i]
  void (*had)(const cplx* a, const cplx* b, cplx* dst, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  cplx (*dot3)(const cplx* a, const cplx* b, const cplx* c, std::size_t n);
};

const Ops& scalar_ops();
const Ops& avx2_ops();   // valid only if avx2_available()
bool avx2_available();

// Active implementation (AVX2 when the CPU has it, else scalar).
const Ops& active();
// Force a backend by name ("scalar", "avx2", "auto"); returns false if
// the backend is not available on this machine.
bool select_backend(const std::string& name);
std::string backend_name();

inline cplx dot(const cplx* a, const cplx* b, std::size_t n) { return active().dot(a, b, n); }
inline cplx dotc(const cplx* a, const cplx* b, std::size_t n) { return active().dotc(a, b, n); }
inline void axpy(cplx s, const cplx* a, cplx* dst, std::size_t n) { active().axpy(s, a, dst, n); }
inline void had(const cplx* a, const cplx* b, cplx* dst, std::size_t n) { active().had(a, b, dst, n); }
inline cplx dot3(const cplx* a, const cplx* b, const cplx* c, std::size_t n) { return active().dot3(a, b, c, n); }

}  // namespace magweyl::kernels

#endif
