#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "adpqe/kernels.hpp"

namespace adpqe::kernels {

#ifdef ADPQE_HAVE_AVX2
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#ifdef ADPQE_HAVE_AVX2
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

namespace {

const KernelTable* table_for(Isa isa) {
  return isa == Isa::avx2 ? avx2_table() : &scalar_table();
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("ADPQE_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && cpu_supports(Isa::avx2)) return avx2_table();
  }
  if (cpu_supports(Isa::avx2)) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(name(isa)));
  }
  current().store(table_for(isa), std::memory_order_release);
}

}  // namespace adpqe::kernels
