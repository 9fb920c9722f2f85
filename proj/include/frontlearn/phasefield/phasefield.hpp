#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "frontlearn/matrix.hpp"
#include "frontlearn/numerics/ode.hpp"
#include "frontlearn/numerics/rng.hpp"

namespace frontlearn::phasefield {

/// Allen-Cahn model  dphi/dt = D lap(phi) - (phi - a)(phi^2 - 1)
/// on [0, L] x [0, L], periodic in x, zero-flux in y, cell-centred grid.
struct PhaseFieldParams {
    double a = -0.1;
    double D = 0.1;
    double L = 90.0;
    std::size_t n_x = 400;
    std::size_t n_y = 400;
    double T = 25.0;
    std::size_t n_save = 500;

    void validate() const;

    double dx() const noexcept { return L / static_cast<double>(n_x); }
    double dy() const noexcept { return L / static_cast<double>(n_y); }
    /// sqrt(2D): the width of the tanh interface profile.
    double interface_width() const;
    std::vector<double> x_grid() const;
    std::vector<double> y_grid() const;
    /// n_save equidistant times from 0 to T.
    std::vector<double> save_times() const;
};

struct PhaseField2D {
    PhaseFieldParams params;
    Matrix values;  // n_y x n_x
    double time = 0.0;

    PhaseField2D() = default;
    explicit PhaseField2D(const PhaseFieldParams& p, double fill = 0.0)
        : params(p), values(p.n_y, p.n_x, fill) {}
};

/// Front height h(x) on the periodic x grid.
struct FrontProfile {
    std::vector<double> h;
    double L = 90.0;

    double dx() const noexcept { return L / static_cast<double>(h.size()); }
};

/// Fronts at equidistant times; row k of `profiles` is the front at times[k].
struct FrontTrajectory {
    std::vector<double> times;
    Matrix profiles;
    double L = 90.0;

    std::size_t n_t() const noexcept { return profiles.rows(); }
    std::size_t n_x() const noexcept { return profiles.cols(); }
    double dt() const noexcept { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    FrontProfile at(std::size_t k) const;
    /// Throws InvalidInput unless times are strictly increasing and equidistant.
    void validate() const;
};

/// D lap(phi) - (phi - a)(phi^2 - 1), 5-point Laplacian, periodic in x,
/// mirror ghost rows in y (phi[-1] = phi[1], phi[n_y] = phi[n_y - 2]).
void allen_cahn_rhs(const PhaseFieldParams& p, std::span<const double> phi, std::span<double> out);
Matrix allen_cahn_rhs(const PhaseField2D& phi);

using SnapshotObserver = std::function<void(std::size_t index, const PhaseField2D& snapshot)>;

/// Integrates the method-of-lines system with DOPRI5 and hands each of the
/// n_save snapshots to `observer` as soon as it is available.
numerics::OdeStats simulate_phase_field(const PhaseField2D& phi0, const numerics::OdeSolverConfig& solver,
                                        const SnapshotObserver& observer);
std::vector<PhaseField2D> simulate_phase_field(const PhaseField2D& phi0,
                                               const numerics::OdeSolverConfig& solver = {});

/// phi = tanh((h(x) - y) / sqrt(2D)). Throws FrontTooCloseToBoundary when
/// any h is within 5 interface widths of y = 0 or y = L.
PhaseField2D lift_front(const FrontProfile& h, const PhaseFieldParams& p);

/// Per-column tanh fit; h(x) = d / c. Throws ExtractionFailure naming the
/// first column without a usable front.
FrontProfile extract_front(const PhaseField2D& phi);

/// offset + sum_{j=1..4} A_j sin(k_j x + theta_j) with offset ~ U[10,20],
/// A_j ~ U[0,1], k_j = 2 pi m_j / L with m_j uniform in {0..32} (drawn
/// with replacement), theta_j ~ U[0, 2 pi).
FrontProfile random_front(numerics::Rng& rng, double L, std::size_t n_x);

/// Debug dump: "PF2D", u32 n_y, u32 n_x, f64 time, n_y*n_x f64 row-major.
void write_snapshot(const PhaseField2D& phi, const std::filesystem::path& path);
PhaseField2D read_snapshot(const std::filesystem::path& path, const PhaseFieldParams& p);

}  // namespace frontlearn::phasefield
