#include <cstdlib>
#include <string>

#include "hsys/kernels.hpp"
#include "hsys/types.hpp"

namespace hsys::kernels {

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw ConfigError("instruction set not available on this CPU: " + std::string(isa_name(isa)));
  }
  return isa == Isa::Avx2 ? detail::kAvx2Table : detail::kScalarTable;
}

namespace {
const KernelTable& select() {
  if (const char* env = std::getenv("HSYS_ISA")) {
    const std::string want(env);
    if (want == "scalar") return detail::kScalarTable;
    if (want == "avx2") return table_for(Isa::Avx2);
  }
  return isa_available(Isa::Avx2) ? detail::kAvx2Table : detail::kScalarTable;
}
}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace hsys::kernels
