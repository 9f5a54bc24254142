// Compiled with -mavx2 -mfma.  Only reached after a runtime CPU check.

#include <immintrin.h>

#include "adpqe/kernels.hpp"

namespace adpqe::kernels {
namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

void xor_diag_accumulate(std::span<cplx> out, std::span<const cplx> diag,
                         std::span<const cplx> in, std::uint64_t flip) {
  const std::size_t n = in.size();
  if (n < 2) {
    scalar_table().xor_diag_accumulate(out, diag, in, flip);
    return;
  }
  // Pairs (i, i+1) with i even land on (j, j+1) or, when bit 0 of flip is
  // set, on (j+1, j) for j = (i ^ flip) & ~1.
  const bool swap = (flip & 1u) != 0;
  for (std::size_t i = 0; i < n; i += 2) {
    const __m256d d = _mm256_loadu_pd(raw(diag.data() + i));
    const __m256d v = _mm256_loadu_pd(raw(in.data() + i));
    __m256d p = cmul(d, v);
    if (swap) p = _mm256_permute2f128_pd(p, p, 0x01);
    double* dst = raw(out.data() + ((i ^ flip) & ~std::uint64_t{1}));
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), p));
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  __m256d acc_re = _mm256_setzero_pd();  // [ar*br, ai*bi, ...]
  __m256d acc_im = _mm256_setzero_pd();  // [ar*bi, ai*br, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a.data() + i));
    const __m256d vb = _mm256_loadu_pd(raw(b.data() + i));
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), acc_im);
  }
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double re = hsum(acc_re);
  double im = hsum(_mm256_mul_pd(acc_im, sign));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x.data() + i));
    double* dst = raw(y.data() + i);
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), cmul(va, vx)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double norm_sq(std::span<const cplx> a) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(raw(a.data() + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

constexpr KernelTable kTable{Isa::avx2, &xor_diag_accumulate, &inner, &axpy, &norm_sq};

}  // namespace

const KernelTable* avx2_table_impl() { return &kTable; }

}  // namespace adpqe::kernels
