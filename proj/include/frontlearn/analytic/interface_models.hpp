#pragma once

#include <cstddef>

#include "frontlearn/numerics/ode.hpp"
#include "frontlearn/phasefield/phasefield.hpp"

namespace frontlearn::analytic {

/// Curvature and normal velocity of the graph (x, h(x)).
struct InterfaceGeometry {
    double kappa;
    double v_n;
};

InterfaceGeometry curvature_normal_velocity(double h_x, double h_xx, double h_t);

/// Sharp-interface (eikonal) front law:
///   dh/dt = D h_xx / (1 + h_x^2) - sqrt(2D) a sqrt(1 + h_x^2)
double eikonal_rhs(double h, double h_x, double h_xx, double a, double D);

/// Deterministic KPZ law in the co-moving frame:
///   dh~/dt = D h_xx - a sqrt(D/2) h_x^2
double kpz_rhs(double h, double h_x, double h_xx, double a, double D);

/// Constant drift removed by the co-moving frame: -sqrt(2D) a.
double front_drift(double a, double D);

/// h~ = h + sqrt(2D) a t, and its inverse.
double tilde_transform(double h, double t, double a, double D);
double inverse_tilde(double h_tilde, double t, double a, double D);

enum class InterfaceModel { eikonal, kpz };

/// Method-of-lines integration of a front law with the 5-point periodic
/// stencils. KPZ is integrated for h~ and mapped back with inverse_tilde,
/// so both kinds return lab-frame heights at n_save equidistant times.
phasefield::FrontTrajectory integrate_analytic_front(InterfaceModel kind, const phasefield::FrontProfile& h0,
                                                     double T, std::size_t n_save, double a, double D,
                                                     const numerics::OdeSolverConfig& solver = {});

}  // namespace frontlearn::analytic
