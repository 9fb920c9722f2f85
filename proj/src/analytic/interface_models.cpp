#include "frontlearn/analytic/interface_models.hpp"

#include <cmath>
#include <vector>

#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/stencil.hpp"

namespace frontlearn::analytic {

InterfaceGeometry curvature_normal_velocity(double h_x, double h_xx, double h_t) {
    const double g = 1.0 + h_x * h_x;
    return {h_xx / (g * std::sqrt(g)), h_t / std::sqrt(g)};
}

double eikonal_rhs(double, double h_x, double h_xx, double a, double D) {
    const double g = 1.0 + h_x * h_x;
    return D * h_xx / g - std::sqrt(2.0 * D) * a * std::sqrt(g);
}

double kpz_rhs(double, double h_x, double h_xx, double a, double D) {
    return D * h_xx - a * std::sqrt(D / 2.0) * h_x * h_x;
}

double front_drift(double a, double D) { return -std::sqrt(2.0 * D) * a; }

double tilde_transform(double h, double t, double a, double D) { return h + std::sqrt(2.0 * D) * a * t; }

double inverse_tilde(double h_tilde, double t, double a, double D) {
    return h_tilde - std::sqrt(2.0 * D) * a * t;
}

phasefield::FrontTrajectory integrate_analytic_front(InterfaceModel kind, const phasefield::FrontProfile& h0,
                                                     double T, std::size_t n_save, double a, double D,
                                                     const numerics::OdeSolverConfig& solver) {
    if (n_save < 2) throw InvalidInput("n_save must be at least 2");
    const std::size_t n = h0.h.size();
    const numerics::StencilConfig stencil{5, h0.dx()};
    stencil.validate();

    std::vector<double> hx(n), hxx(n);
    auto rhs = [&](double, std::span<const double> h, std::span<double> dhdt) {
        numerics::fd_first_derivative(h, stencil, hx);
        numerics::fd_second_derivative(h, stencil, hxx);
        if (kind == InterfaceModel::eikonal) {
            for (std::size_t i = 0; i < n; ++i) dhdt[i] = eikonal_rhs(h[i], hx[i], hxx[i], a, D);
        } else {
            for (std::size_t i = 0; i < n; ++i) dhdt[i] = kpz_rhs(h[i], hx[i], hxx[i], a, D);
        }
    };

    phasefield::FrontTrajectory traj;
    traj.L = h0.L;
    traj.times.resize(n_save);
    for (std::size_t k = 0; k < n_save; ++k) traj.times[k] = T * static_cast<double>(k) / static_cast<double>(n_save - 1);
    traj.times.back() = T;

    // At t = 0 the two frames coincide, so h0 is also the initial h~.
    traj.profiles = numerics::rk45_integrate(rhs, h0.h, 0.0, T, traj.times, solver);
    if (kind == InterfaceModel::kpz) {
        for (std::size_t k = 0; k < n_save; ++k)
            for (double& v : traj.profiles.row(k)) v = inverse_tilde(v, traj.times[k], a, D);
    }
    return traj;
}

}  // namespace frontlearn::analytic
