#include "hsys/kernels.hpp"

namespace hsys::kernels::detail {
// No vector variant on this architecture; isa_available(Avx2) reports false.
const KernelTable kAvx2Table = kScalarTable;
}  // namespace hsys::kernels::detail
