#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2+FMA implementation compiled in a
// separate translation unit. The active table is chosen once at startup
// from CPUID; FRONTLEARN_ISA=scalar forces the reference path.
//
// The two paths agree to rounding (different summation order, FMA
// contraction, polynomial exp/tanh) and are checked against each other in
// tests/test_simd_equivalence.cpp. Within one path results are bitwise
// reproducible.

namespace frontlearn::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Coefficients of the Allen-Cahn right-hand side on one grid row.
struct AllenCahnCoeffs {
    double diffusivity;  // D
    double asymmetry;    // a
    double inv_dx2;      // 1 / dx^2 (periodic x direction)
    double inv_dy2;      // 1 / dy^2
};

/// Gauss-Newton normal-equation sums for r_j = tanh(c*y_j - d) - phi_j.
struct TanhNormalSums {
    double jcc = 0.0;  // sum (dr/dc)^2
    double jcd = 0.0;  // sum (dr/dc)(dr/dd)
    double jdd = 0.0;  // sum (dr/dd)^2
    double gc = 0.0;   // sum (dr/dc) r
    double gd = 0.0;   // sum (dr/dd) r
    double sse = 0.0;  // sum r^2
};

struct KernelTable {
    Isa isa;

    /// out[i] = D * (lap_x + lap_y) - (phi - a)(phi^2 - 1) for one row,
    /// periodic in x. `up`/`down` are the neighbouring rows (already
    /// mirrored at the y boundaries by the caller).
    void (*allen_cahn_row)(const double* up, const double* mid, const double* down, double* out,
                           std::size_t n, const AllenCahnCoeffs& k);

    TanhNormalSums (*tanh_normal_sums)(const double* y, const double* phi, std::size_t n, double c, double d);

    /// C(m x n) = A(m x k) * B(k x n), or C += A*B when `accumulate`.
    /// All operands row-major and densely packed.
    void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c,
                 bool accumulate);

    /// act[i] = z[i] * sigmoid(z[i]); sig[i] = sigmoid(z[i]).
    void (*swish_forward)(const double* z, double* act, double* sig, std::size_t n);

    /// grad_z[i] = grad_act[i] * d swish / dz, using the cached sigmoid.
    void (*swish_backward)(const double* z, const double* sig, const double* grad_act, double* grad_z,
                           std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 path was not compiled or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Table selected at startup.
const KernelTable& kernels() noexcept;

}  // namespace frontlearn::simd
