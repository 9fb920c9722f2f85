#include "frontlearn/phasefield/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "frontlearn/binary_io.hpp"
#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/tanh_fit.hpp"
#include "frontlearn/simd/kernels.hpp"

namespace frontlearn::phasefield {

void PhaseFieldParams::validate() const {
    if (!(std::abs(a) < 1.0)) throw InvalidInput("asymmetry a must satisfy |a| < 1");
    if (!(D > 0.0)) throw InvalidInput("diffusivity D must be positive");
    if (!(L > 0.0)) throw InvalidInput("domain length L must be positive");
    if (n_x < 16 || n_y < 16) throw InvalidInput("grid must be at least 16 x 16");
    if (!(T > 0.0)) throw InvalidInput("final time T must be positive");
    if (n_save < 5) throw InvalidInput("n_save must be at least 5");
}

double PhaseFieldParams::interface_width() const { return std::sqrt(2.0 * D); }

std::vector<double> PhaseFieldParams::x_grid() const {
    std::vector<double> x(n_x);
    for (std::size_t i = 0; i < n_x; ++i) x[i] = (static_cast<double>(i) + 0.5) * dx();
    return x;
}

std::vector<double> PhaseFieldParams::y_grid() const {
    std::vector<double> y(n_y);
    for (std::size_t j = 0; j < n_y; ++j) y[j] = (static_cast<double>(j) + 0.5) * dy();
    return y;
}

std::vector<double> PhaseFieldParams::save_times() const {
    std::vector<double> t(n_save);
    const double step = T / static_cast<double>(n_save - 1);
    for (std::size_t k = 0; k < n_save; ++k) t[k] = static_cast<double>(k) * step;
    t.back() = T;
    return t;
}

FrontProfile FrontTrajectory::at(std::size_t k) const {
    const auto r = profiles.row(k);
    return FrontProfile{{r.begin(), r.end()}, L};
}

void FrontTrajectory::validate() const {
    if (times.size() != profiles.rows()) throw InvalidInput("trajectory has mismatched time axis");
    if (times.size() < 2) return;
    const double step = times[1] - times[0];
    if (!(step > 0.0)) throw InvalidInput("trajectory times must be strictly increasing");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double expected = times[0] + static_cast<double>(k) * step;
        if (std::abs(times[k] - expected) > 1e-12 * std::max(1.0, std::abs(expected)) + 1e-12 * k * step)
            throw InvalidInput("trajectory times are not equidistant");
    }
}

void allen_cahn_rhs(const PhaseFieldParams& p, std::span<const double> phi, std::span<double> out) {
    const std::size_t nx = p.n_x;
    const std::size_t ny = p.n_y;
    if (phi.size() != nx * ny || out.size() != nx * ny) throw InvalidInput("phase field has wrong size");
    const simd::AllenCahnCoeffs k{p.D, p.a, 1.0 / (p.dx() * p.dx()), 1.0 / (p.dy() * p.dy())};
    const auto& kern = simd::kernels();
    for (std::size_t r = 0; r < ny; ++r) {
        const std::size_t below = r == 0 ? 1 : r - 1;
        const std::size_t above = r + 1 == ny ? ny - 2 : r + 1;
        kern.allen_cahn_row(phi.data() + below * nx, phi.data() + r * nx, phi.data() + above * nx,
                            out.data() + r * nx, nx, k);
    }
}

Matrix allen_cahn_rhs(const PhaseField2D& phi) {
    Matrix out(phi.values.rows(), phi.values.cols());
    allen_cahn_rhs(phi.params, phi.values.flat(), out.flat());
    return out;
}

numerics::OdeStats simulate_phase_field(const PhaseField2D& phi0, const numerics::OdeSolverConfig& solver,
                                        const SnapshotObserver& observer) {
    const PhaseFieldParams& p = phi0.params;
    p.validate();
    for (double v : phi0.values.flat())
        if (!std::isfinite(v) || std::abs(v) > 1.1) throw InvalidInput("initial phase field must lie in [-1.1, 1.1]");

    const auto times = p.save_times();
    PhaseField2D snapshot(p);
    return numerics::rk45_integrate(
        [&p](double, std::span<const double> y, std::span<double> dydt) { allen_cahn_rhs(p, y, dydt); },
        phi0.values.flat(), 0.0, p.T, times, solver,
        [&](std::size_t k, double t, std::span<const double> y) {
            std::copy(y.begin(), y.end(), snapshot.values.data());
            snapshot.time = t;
            observer(k, snapshot);
        });
}

std::vector<PhaseField2D> simulate_phase_field(const PhaseField2D& phi0, const numerics::OdeSolverConfig& solver) {
    std::vector<PhaseField2D> out;
    out.reserve(phi0.params.n_save);
    simulate_phase_field(phi0, solver, [&](std::size_t, const PhaseField2D& s) { out.push_back(s); });
    return out;
}

PhaseField2D lift_front(const FrontProfile& h, const PhaseFieldParams& p) {
    if (h.h.size() != p.n_x) throw InvalidInput("front profile length does not match n_x");
    const double w = p.interface_width();
    const double margin = 5.0 * w;
    for (double v : h.h) {
        if (!std::isfinite(v)) throw InvalidInput("front profile has non-finite entries");
        if (v < margin || v > p.L - margin)
            throw FrontTooCloseToBoundary("front height " + std::to_string(v) + " is within 5 interface widths of the boundary");
    }
    PhaseField2D phi(p);
    const auto y = p.y_grid();
    for (std::size_t j = 0; j < p.n_y; ++j)
        for (std::size_t i = 0; i < p.n_x; ++i) phi.values(j, i) = std::tanh((h.h[i] - y[j]) / w);
    return phi;
}

FrontProfile extract_front(const PhaseField2D& phi) {
    const PhaseFieldParams& p = phi.params;
    const auto y = p.y_grid();
    const double width = p.interface_width();
    FrontProfile front{std::vector<double>(p.n_x), p.L};
    std::vector<double> column(p.n_y);
    for (std::size_t i = 0; i < p.n_x; ++i) {
        for (std::size_t j = 0; j < p.n_y; ++j) column[j] = phi.values(j, i);
        const auto crossing = numerics::find_sign_change(y, column);
        if (!crossing) throw ExtractionFailure("no front crossing", i);
        const double c0 = crossing->decreasing ? -1.0 / width : 1.0 / width;
        try {
            const auto fit = numerics::fit_tanh(y, column, {c0, c0 * crossing->location});
            front.h[i] = fit.crossing();
        } catch (const NumericalError& e) {
            throw ExtractionFailure(std::string("tanh fit failed: ") + e.what(), i);
        }
    }
    return front;
}

FrontProfile random_front(numerics::Rng& rng, double L, std::size_t n_x) {
    constexpr int kModes = 4;
    constexpr std::uint64_t kMaxWavenumber = 32;
    const double offset = rng.uniform(10.0, 20.0);
    double amp[kModes], k[kModes], phase[kModes];
    for (int j = 0; j < kModes; ++j) {
        amp[j] = rng.uniform();
        k[j] = 2.0 * std::numbers::pi / L * static_cast<double>(rng.below(kMaxWavenumber + 1));
        phase[j] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    FrontProfile front{std::vector<double>(n_x), L};
    const double dx = L / static_cast<double>(n_x);
    for (std::size_t i = 0; i < n_x; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx;
        double v = offset;
        for (int j = 0; j < kModes; ++j) v += amp[j] * std::sin(k[j] * x + phase[j]);
        front.h[i] = v;
    }
    return front;
}

void write_snapshot(const PhaseField2D& phi, const std::filesystem::path& path) {
    io::BinaryWriter w(path);
    w.magic("PF2D");
    w.put(static_cast<std::uint32_t>(phi.values.rows()));
    w.put(static_cast<std::uint32_t>(phi.values.cols()));
    w.put(phi.time);
    w.put_f64s(phi.values.flat());
    w.close();
}

PhaseField2D read_snapshot(const std::filesystem::path& path, const PhaseFieldParams& p) {
    io::BinaryReader r(path);
    r.expect_magic("PF2D");
    const auto ny = r.get<std::uint32_t>();
    const auto nx = r.get<std::uint32_t>();
    PhaseFieldParams q = p;
    q.n_y = ny;
    q.n_x = nx;
    PhaseField2D phi(q);
    phi.time = r.get<double>();
    r.get_f64s(phi.values.flat());
    r.expect_end();
    return phi;
}

}  // namespace frontlearn::phasefield
