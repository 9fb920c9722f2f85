#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include "frontlearn/matrix.hpp"

namespace frontlearn::numerics {

struct OdeSolverConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    double max_step = std::numeric_limits<double>::infinity();
    /// 0 selects the first step automatically.
    double initial_step = 0.0;
    std::size_t max_steps = 1'000'000;

    void validate() const;
};

/// dy/dt = rhs(t, y), written into `dydt`.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called once per requested output time, in order.
using OdeObserver = std::function<void(std::size_t index, double t, std::span<const double> y)>;

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

/// Dormand-Prince 5(4) with the embedded 4th-order error estimate and the
/// 4th-order continuous extension for output at `t_eval`. Throws
/// IntegrationFailure when the step size underflows, the step budget runs
/// out, or the state stops being finite.
OdeStats rk45_integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                        std::span<const double> t_eval, const OdeSolverConfig& cfg,
                        const OdeObserver& observer);

/// Convenience overload collecting the states at `t_eval` as matrix rows.
Matrix rk45_integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      std::span<const double> t_eval, const OdeSolverConfig& cfg = {});

}  // namespace frontlearn::numerics
