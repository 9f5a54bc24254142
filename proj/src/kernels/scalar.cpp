#include "adpqe/kernels.hpp"

namespace adpqe::kernels {
namespace {

void xor_diag_accumulate(std::span<cplx> out, std::span<const cplx> diag,
                         std::span<const cplx> in, std::uint64_t flip) {
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    out[i ^ flip] += diag[i] * in[i];
  }
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm_sq(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

constexpr KernelTable kTable{Isa::scalar, &xor_diag_accumulate, &inner, &axpy, &norm_sq};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace adpqe::kernels
