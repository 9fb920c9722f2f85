#pragma once

#include "frontlearn/simd/kernels.hpp"

namespace frontlearn::simd {

namespace detail {

// Internal linkage: this is compiled with different ISA flags per TU.
static inline double allen_cahn_point(double up, double mid, double down, double left, double right,
                               const AllenCahnCoeffs& k) {
    const double lap = (left + right - 2.0 * mid) * k.inv_dx2 + (up + down - 2.0 * mid) * k.inv_dy2;
    return k.diffusivity * lap - (mid - k.asymmetry) * (mid * mid - 1.0);
}

}  // namespace detail

#if defined(FRONTLEARN_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace frontlearn::simd
