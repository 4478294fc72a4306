#include <cstdlib>
#include <stdexcept>
#include <string>

#include "patternboost/kernels/kernels.hpp"

namespace pb::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("instruction set " + std::string(to_string(isa)) + " is not available");
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: return kAvx2Table;
#endif
#if defined(__aarch64__)
    case Isa::neon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

namespace {
const KernelTable& select() {
  if (const char* env = std::getenv("PATTERNBOOST_ISA")) {
    std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
      if (want == to_string(isa)) return table(isa);
    throw std::invalid_argument("PATTERNBOOST_ISA='" + std::string(want) + "' is not one of scalar|avx2|neon");
  }
  if (isa_available(Isa::avx2)) return table(Isa::avx2);
  if (isa_available(Isa::neon)) return table(Isa::neon);
  return kScalarTable;
}
}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace pb::kernels
