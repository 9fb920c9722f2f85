#include <cmath>

#include "frontlearn/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace frontlearn::simd {

namespace {

void allen_cahn_row(const double* up, const double* mid, const double* down, double* out, std::size_t n,
                    const AllenCahnCoeffs& k) {
    for (std::size_t i = 0; i < n; ++i) {
        const double left = mid[i == 0 ? n - 1 : i - 1];
        const double right = mid[i + 1 == n ? 0 : i + 1];
        out[i] = detail::allen_cahn_point(up[i], mid[i], down[i], left, right, k);
    }
}

TanhNormalSums tanh_normal_sums(const double* y, const double* phi, std::size_t n, double c, double d) {
    TanhNormalSums s;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = std::tanh(c * y[j] - d);
        const double r = t - phi[j];
        const double sech2 = 1.0 - t * t;
        const double jc = sech2 * y[j];
        const double jd = -sech2;
        s.jcc += jc * jc;
        s.jcd += jc * jd;
        s.jdd += jd * jd;
        s.gc += jc * r;
        s.gd += jd * r;
        s.sse += r * r;
    }
    return s;
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c,
          bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        if (!accumulate)
            for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

void swish_forward(const double* z, double* act, double* sig, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double s = 1.0 / (1.0 + std::exp(-z[i]));
        sig[i] = s;
        act[i] = z[i] * s;
    }
}

void swish_backward(const double* z, const double* sig, const double* grad_act, double* grad_z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sig[i];
        grad_z[i] = grad_act[i] * (s * (1.0 + z[i] * (1.0 - s)));
    }
}

constexpr KernelTable kScalar{Isa::scalar, allen_cahn_row, tanh_normal_sums, gemm, swish_forward, swish_backward};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace frontlearn::simd
