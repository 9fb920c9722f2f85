#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace frontlearn::numerics {

struct TanhFitInit {
    double c0;
    double d0;
};

/// Least-squares fit of phi(y) ~ tanh(c*y - d). The zero crossing (front
/// position) is d / c.
struct TanhFit {
    double c = 0.0;
    double d = 0.0;
    double sse = 0.0;
    std::size_t iterations = 0;

    double crossing() const noexcept { return d / c; }
};

struct SignChange {
    double location;  // linear interpolation of the first zero crossing
    bool decreasing;  // phi goes from positive to non-positive with increasing y
};

/// First sign change of `phi` along `y`, if any.
std::optional<SignChange> find_sign_change(std::span<const double> y, std::span<const double> phi);

/// Levenberg-damped Gauss-Newton on the two parameters. Stops when the
/// update norm drops below 1e-10; throws NoFrontCrossing if `phi` never
/// changes sign and FitDiverged (carrying the best parameters) after 100
/// iterations without convergence.
TanhFit fit_tanh(std::span<const double> y, std::span<const double> phi, TanhFitInit init);

}  // namespace frontlearn::numerics
