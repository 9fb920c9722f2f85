#include "frontlearn/numerics/tanh_fit.hpp"

#include <algorithm>
#include <cmath>

#include "frontlearn/errors.hpp"
#include "frontlearn/simd/kernels.hpp"

namespace frontlearn::numerics {

namespace {

constexpr std::size_t kMaxIterations = 100;
constexpr double kStepTolerance = 1e-10;

}  // namespace

std::optional<SignChange> find_sign_change(std::span<const double> y, std::span<const double> phi) {
    for (std::size_t j = 0; j + 1 < phi.size(); ++j) {
        const bool pos0 = phi[j] > 0.0;
        const bool pos1 = phi[j + 1] > 0.0;
        if (pos0 == pos1) continue;
        const double denom = phi[j] - phi[j + 1];
        const double frac = denom != 0.0 ? phi[j] / denom : 0.0;
        return SignChange{y[j] + frac * (y[j + 1] - y[j]), pos0};
    }
    return std::nullopt;
}

TanhFit fit_tanh(std::span<const double> y, std::span<const double> phi, TanhFitInit init) {
    if (y.size() != phi.size()) throw InvalidInput("fit_tanh: grid and column sizes differ");
    if (!find_sign_change(y, phi)) throw NoFrontCrossing("phase column never changes sign");

    const auto& k = simd::kernels();
    double c = init.c0;
    double d = init.d0;
    simd::TanhNormalSums s = k.tanh_normal_sums(y.data(), phi.data(), y.size(), c, d);
    if (!std::isfinite(s.sse)) throw FitDiverged("non-finite residual at the initial guess", c, d, s.sse);

    double lambda = 1e-3;
    for (std::size_t it = 1; it <= kMaxIterations; ++it) {
        const double a11 = s.jcc * (1.0 + lambda);
        const double a22 = s.jdd * (1.0 + lambda);
        const double a12 = s.jcd;
        const double det = a11 * a22 - a12 * a12;
        const double dc = -(a22 * s.gc - a12 * s.gd) / det;
        const double dd = -(a11 * s.gd - a12 * s.gc) / det;
        const double step = std::hypot(dc, dd);
        if (!std::isfinite(step)) throw FitDiverged("singular normal equations", c, d, s.sse);

        const simd::TanhNormalSums trial = k.tanh_normal_sums(y.data(), phi.data(), y.size(), c + dc, d + dd);
        if (std::isfinite(trial.sse) && trial.sse <= s.sse) {
            c += dc;
            d += dd;
            s = trial;
            lambda = std::max(lambda * 0.1, 1e-12);
        } else {
            lambda *= 10.0;
        }
        if (step < kStepTolerance) return TanhFit{c, d, s.sse, it};
    }
    throw FitDiverged("tanh fit did not converge in 100 iterations", c, d, s.sse);
}

}  // namespace frontlearn::numerics
