#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pcopt/simd.hpp"

namespace pcopt::simd {
namespace {

bool cpu_has_avx2() {
#if defined(PCOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Kernels* best_available() {
#if defined(PCOPT_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_kernels();
#endif
#if defined(PCOPT_HAVE_NEON)
  return &detail::neon_kernels();
#endif
  return &detail::scalar_kernels();
}

const Kernels* initial_selection() {
  const char* env = std::getenv("PCOPT_SIMD");
  if (env == nullptr) return best_available();
  const std::string choice(env);
  if (choice == "scalar") return &detail::scalar_kernels();
  if (choice == "avx2" && isa_available(Isa::avx2)) return &kernels(Isa::avx2);
  if (choice == "neon" && isa_available(Isa::neon)) return &kernels(Isa::neon);
  return best_available();
}

std::atomic<const Kernels*>& active() {
  static std::atomic<const Kernels*> table{initial_selection()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
    case Isa::neon:
#if defined(PCOPT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("SIMD variant not available on this host: " + std::string(isa_name(isa)));
  }
  switch (isa) {
    case Isa::scalar:
      return detail::scalar_kernels();
#if defined(PCOPT_HAVE_AVX2)
    case Isa::avx2:
      return detail::avx2_kernels();
#endif
#if defined(PCOPT_HAVE_NEON)
    case Isa::neon:
      return detail::neon_kernels();
#endif
    default:
      break;
  }
  return detail::scalar_kernels();
}

const Kernels& kernels() { return *active().load(std::memory_order_relaxed); }

Isa default_isa() { return initial_selection()->isa; }

void select_isa(Isa isa) { active().store(&kernels(isa), std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace pcopt::simd
