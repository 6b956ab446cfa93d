#include "magweyl/kernels.hpp"

namespace magweyl::kernels {

namespace {

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void axpy_scalar(cplx s, const cplx* a, cplx* dst, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    dst[i] += cplx{sr * ar - si * ai, sr * ai + si * ar};
  }
}

void had_scalar(const cplx* a, const cplx* b, cplx* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    dst[i] = cplx{ar * br - ai * bi, ar * bi + ai * br};
  }
}

cplx dot3_scalar(const cplx* a, const cplx* b, const cplx* c, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double pr = ar * br - ai * bi;
    const double pi = ar * bi + ai * br;
    const double cr = c[i].real(), ci = c[i].imag();
    re += pr * cr - pi * ci;
    im += pr * ci + pi * cr;
  }
  return {re, im};
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_scalar, dotc_scalar, axpy_scalar, had_scalar, dot3_scalar};
  return ops;
}

}  // namespace magweyl::kernels
