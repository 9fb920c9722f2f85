// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "frontlearn/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace frontlearn::simd {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x) for x clamped to [-708, 709]: Cody-Waite reduction x = n ln2 + r,
// |r| <= ln2/2, degree-12 Taylor polynomial for e^r, then scaling by 2^n
// assembled directly in the exponent field. About 2 ulp.
inline __m256d exp_pd(__m256d x) {
    const __m256d magic = _mm256_set1_pd(0x1.8p52);
    x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.0));
    const __m256d kd = _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634074), magic);
    const __m256d n = _mm256_sub_pd(kd, magic);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

    constexpr double inv_fact[] = {1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
                                   1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,     1.0 / 120.0,
                                   1.0 / 24.0,        1.0 / 6.0,        0.5,             1.0,
                                   1.0};
    __m256d p = _mm256_set1_pd(inv_fact[0]);
    for (int i = 1; i < 13; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_fact[i]));

    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(_mm256_castpd_si256(kd), _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline __m256d tanh_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d e2x = exp_pd(_mm256_add_pd(x, x));
    return _mm256_sub_pd(one, _mm256_div_pd(_mm256_set1_pd(2.0), _mm256_add_pd(e2x, one)));
}

inline __m256d sigmoid_pd(__m256d z) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), z));
    return _mm256_div_pd(one, _mm256_add_pd(one, e));
}

void allen_cahn_row(const double* up, const double* mid, const double* down, double* out, std::size_t n,
                    const AllenCahnCoeffs& k) {
    if (n < 3) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = detail::allen_cahn_point(up[i], mid[i], down[i], mid[i == 0 ? n - 1 : i - 1],
                                              mid[i + 1 == n ? 0 : i + 1], k);
        return;
    }
    out[0] = detail::allen_cahn_point(up[0], mid[0], down[0], mid[n - 1], mid[1], k);

    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vdx = _mm256_set1_pd(k.inv_dx2);
    const __m256d vdy = _mm256_set1_pd(k.inv_dy2);
    const __m256d vd = _mm256_set1_pd(k.diffusivity);
    const __m256d va = _mm256_set1_pd(k.asymmetry);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d c = _mm256_loadu_pd(mid + i);
        const __m256d l = _mm256_loadu_pd(mid + i - 1);
        const __m256d r = _mm256_loadu_pd(mid + i + 1);
        const __m256d u = _mm256_loadu_pd(up + i);
        const __m256d d = _mm256_loadu_pd(down + i);
        const __m256d lapx = _mm256_fnmadd_pd(two, c, _mm256_add_pd(l, r));
        const __m256d lapy = _mm256_fnmadd_pd(two, c, _mm256_add_pd(u, d));
        const __m256d lap = _mm256_fmadd_pd(lapx, vdx, _mm256_mul_pd(lapy, vdy));
        const __m256d reaction = _mm256_mul_pd(_mm256_sub_pd(c, va), _mm256_fmsub_pd(c, c, one));
        _mm256_storeu_pd(out + i, _mm256_fmsub_pd(vd, lap, reaction));
    }
    for (; i < n - 1; ++i) out[i] = detail::allen_cahn_point(up[i], mid[i], down[i], mid[i - 1], mid[i + 1], k);
    out[n - 1] = detail::allen_cahn_point(up[n - 1], mid[n - 1], down[n - 1], mid[n - 2], mid[0], k);
}

TanhNormalSums tanh_normal_sums(const double* y, const double* phi, std::size_t n, double c, double d) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vd = _mm256_set1_pd(d);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d jcc = _mm256_setzero_pd(), jcd = jcc, jdd = jcc, gc = jcc, gd = jcc, sse = jcc;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d yy = _mm256_loadu_pd(y + j);
        const __m256d t = tanh_pd(_mm256_fmsub_pd(vc, yy, vd));
        const __m256d r = _mm256_sub_pd(t, _mm256_loadu_pd(phi + j));
        const __m256d sech2 = _mm256_fnmadd_pd(t, t, one);
        const __m256d jc = _mm256_mul_pd(sech2, yy);
        jcc = _mm256_fmadd_pd(jc, jc, jcc);
        jcd = _mm256_fnmadd_pd(jc, sech2, jcd);
        jdd = _mm256_fmadd_pd(sech2, sech2, jdd);
        gc = _mm256_fmadd_pd(jc, r, gc);
        gd = _mm256_fnmadd_pd(sech2, r, gd);
        sse = _mm256_fmadd_pd(r, r, sse);
    }
    TanhNormalSums s{hsum(jcc), hsum(jcd), hsum(jdd), hsum(gc), hsum(gd), hsum(sse)};
    for (; j < n; ++j) {
        const double t = std::tanh(c * y[j] - d);
        const double r = t - phi[j];
        const double sech2 = 1.0 - t * t;
        const double jc = sech2 * y[j];
        s.jcc += jc * jc;
        s.jcd -= jc * sech2;
        s.jdd += sech2 * sech2;
        s.gc += jc * r;
        s.gd -= sech2 * r;
        s.sse += r * r;
    }
    return s;
}

// R x 8 register block of C += A * B.
template <int R>
inline void block_x8(std::size_t n, std::size_t k, const double* a, const double* b, double* c, bool accumulate) {
    __m256d acc0[R], acc1[R];
    for (int r = 0; r < R; ++r) {
        acc0[r] = accumulate ? _mm256_loadu_pd(c + r * n) : _mm256_setzero_pd();
        acc1[r] = accumulate ? _mm256_loadu_pd(c + r * n + 4) : _mm256_setzero_pd();
    }
    for (std::size_t p = 0; p < k; ++p) {
        const __m256d b0 = _mm256_loadu_pd(b + p * n);
        const __m256d b1 = _mm256_loadu_pd(b + p * n + 4);
        for (int r = 0; r < R; ++r) {
            const __m256d av = _mm256_broadcast_sd(a + r * k + p);
            acc0[r] = _mm256_fmadd_pd(av, b0, acc0[r]);
            acc1[r] = _mm256_fmadd_pd(av, b1, acc1[r]);
        }
    }
    for (int r = 0; r < R; ++r) {
        _mm256_storeu_pd(c + r * n, acc0[r]);
        _mm256_storeu_pd(c + r * n + 4, acc1[r]);
    }
}

template <int R>
inline void block_x4(std::size_t n, std::size_t k, const double* a, const double* b, double* c, bool accumulate) {
    __m256d acc[R];
    for (int r = 0; r < R; ++r) acc[r] = accumulate ? _mm256_loadu_pd(c + r * n) : _mm256_setzero_pd();
    for (std::size_t p = 0; p < k; ++p) {
        const __m256d b0 = _mm256_loadu_pd(b + p * n);
        for (int r = 0; r < R; ++r) acc[r] = _mm256_fmadd_pd(_mm256_broadcast_sd(a + r * k + p), b0, acc[r]);
    }
    for (int r = 0; r < R; ++r) _mm256_storeu_pd(c + r * n, acc[r]);
}

template <int R>
void row_panel(std::size_t n, std::size_t k, const double* a, const double* b, double* c, bool accumulate) {
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) block_x8<R>(n, k, a, b + j, c + j, accumulate);
    for (; j + 4 <= n; j += 4) block_x4<R>(n, k, a, b + j, c + j, accumulate);
    for (; j < n; ++j) {
        for (int r = 0; r < R; ++r) {
            double s = accumulate ? c[r * n + j] : 0.0;
            for (std::size_t p = 0; p < k; ++p) s += a[r * k + p] * b[p * n + j];
            c[r * n + j] = s;
        }
    }
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c,
          bool accumulate) {
    constexpr std::size_t kRows = 6;
    std::size_t i = 0;
    for (; i + kRows <= m; i += kRows) row_panel<6>(n, k, a + i * k, b, c + i * n, accumulate);
    for (; i < m; ++i) row_panel<1>(n, k, a + i * k, b, c + i * n, accumulate);
}

void swish_forward(const double* z, double* act, double* sig, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d zz = _mm256_loadu_pd(z + i);
        const __m256d s = sigmoid_pd(zz);
        _mm256_storeu_pd(sig + i, s);
        _mm256_storeu_pd(act + i, _mm256_mul_pd(zz, s));
    }
    for (; i < n; ++i) {
        const double s = 1.0 / (1.0 + std::exp(-z[i]));
        sig[i] = s;
        act[i] = z[i] * s;
    }
}

void swish_backward(const double* z, const double* sig, const double* grad_act, double* grad_z, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = _mm256_loadu_pd(sig + i);
        const __m256d zz = _mm256_loadu_pd(z + i);
        const __m256d inner = _mm256_fmadd_pd(zz, _mm256_sub_pd(one, s), one);
        _mm256_storeu_pd(grad_z + i, _mm256_mul_pd(_mm256_loadu_pd(grad_act + i), _mm256_mul_pd(s, inner)));
    }
    for (; i < n; ++i) {
        const double s = sig[i];
        grad_z[i] = grad_act[i] * (s * (1.0 + z[i] * (1.0 - s)));
    }
}

constexpr KernelTable kAvx2{Isa::avx2, allen_cahn_row, tanh_normal_sums, gemm, swish_forward, swish_backward};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace frontlearn::simd
