#pragma once

#include "superlase/kernels/kernels.hpp"

namespace superlase::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(SUPERLASE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

} // namespace superlase::kernels::detail
