#pragma once

// Data-parallel inner loops of the statevector simulator.
//
// Every kernel has a portable scalar reference implementation.  Vector
// variants are compiled separately and chosen once at startup from the
// host CPU features.  ADPQE_ISA=scalar|avx2 in the environment overrides
// the automatic choice.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace adpqe::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // out[i ^ flip] += diag[i] * in[i] for every index i.
  void (*xor_diag_accumulate)(std::span<cplx> out, std::span<const cplx> diag,
                              std::span<const cplx> in, std::uint64_t flip);
  // sum_i conj(a[i]) * b[i]
  cplx (*inner)(std::span<const cplx> a, std::span<const cplx> b);
  // y += alpha * x
  void (*axpy)(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
  // sum_i |a[i]|^2
  double (*norm_sq)(std::span<const cplx> a);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

// Table used by the simulator.
const KernelTable& active();

// Switches the active table; throws std::invalid_argument if the ISA is
// unavailable on this build or host.  Intended for tests and benchmarks.
void select(Isa isa);

std::string_view name(Isa isa);

}  // namespace adpqe::kernels
