#pragma once

#include "specknot/simd/kernels.hpp"

namespace specknot::simd {

namespace scalar {
const KernelTable& table() noexcept;
}

#if defined(SPECKNOT_HAVE_AVX2)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

#if defined(SPECKNOT_HAVE_NEON)
namespace neon {
const KernelTable& table() noexcept;
}
#endif

}  // namespace specknot::simd
