#pragma once

#include "edbsw/simd.hpp"

// Internal: the per-ISA tables, defined in their respective kernels_*.cpp.
// Declared extern here so the namespace-scope const definitions keep external
// linkage for the dispatcher.

namespace edbsw::kernels {

extern const KernelTable kScalarTable;
#if defined(__x86_64__)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif

}  // namespace edbsw::kernels
