#include "frontlearn/numerics/stencil.hpp"

#include <string>

#include "frontlearn/errors.hpp"

namespace frontlearn::numerics {

void StencilConfig::validate() const {
    if (length < 3 || length % 2 == 0)
        throw InvalidInput("stencil length must be odd and >= 3, got " + std::to_string(length));
    if (length != 5)
        throw InvalidInput("only the 5-point stencil is implemented, got length " + std::to_string(length));
    if (!(spacing > 0.0)) throw InvalidInput("stencil spacing must be positive");
}

namespace {

void check(std::span<const double> field, const StencilConfig& cfg, std::span<double> out) {
    cfg.validate();
    if (field.size() < cfg.length)
        throw InvalidInput("field has " + std::to_string(field.size()) + " points, stencil needs " +
                           std::to_string(cfg.length));
    if (out.size() != field.size()) throw InvalidInput("output size does not match field size");
}

std::size_t wrap(std::size_t i, std::ptrdiff_t off, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(((static_cast<std::ptrdiff_t>(i) + off) % m + m) % m);
}

}  // namespace

void fd_first_derivative(std::span<const double> f, const StencilConfig& cfg, std::span<double> out) {
    check(f, cfg, out);
    const std::size_t n = f.size();
    const double scale = 1.0 / (12.0 * cfg.spacing);
    auto at = [&](std::size_t i, std::ptrdiff_t off) { return f[wrap(i, off, n)]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * scale;
        } else {
            out[i] = (at(i, -2) - 8.0 * at(i, -1) + 8.0 * at(i, 1) - at(i, 2)) * scale;
        }
    }
}

void fd_second_derivative(std::span<const double> f, const StencilConfig& cfg, std::span<double> out) {
    check(f, cfg, out);
    const std::size_t n = f.size();
    const double scale = 1.0 / (12.0 * cfg.spacing * cfg.spacing);
    auto at = [&](std::size_t i, std::ptrdiff_t off) { return f[wrap(i, off, n)]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * scale;
        } else {
            out[i] = (-at(i, -2) + 16.0 * at(i, -1) - 30.0 * f[i] + 16.0 * at(i, 1) - at(i, 2)) * scale;
        }
    }
}

std::vector<double> fd_first_derivative(std::span<const double> field, const StencilConfig& cfg, Boundary) {
    std::vector<double> out(field.size());
    fd_first_derivative(field, cfg, std::span<double>(out));
    return out;
}

std::vector<double> fd_second_derivative(std::span<const double> field, const StencilConfig& cfg, Boundary) {
    std::vector<double> out(field.size());
    fd_second_derivative(field, cfg, std::span<double>(out));
    return out;
}

Matrix fd_time_derivative(const Matrix& s, double dt) {
    const std::size_t nt = s.rows();
    if (nt < 5) throw InvalidInput("time derivative needs at least 5 snapshots, got " + std::to_string(nt));
    if (!(dt > 0.0)) throw InvalidInput("snapshot spacing dt must be positive");

    const std::size_t nx = s.cols();
    const double scale = 1.0 / (12.0 * dt);
    Matrix out(nt, nx);
    for (std::size_t x = 0; x < nx; ++x) {
        auto f = [&](std::size_t t) { return s(t, x); };
        // Every row is written in differences so a constant series gives exactly 0.
        auto g = [&](std::size_t t) { return f(t) - f(0); };
        out(0, x) = (48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) * scale;
        out(1, x) = (-10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) * scale;
        for (std::size_t t = 2; t + 2 < nt; ++t)
            out(t, x) = (8.0 * (f(t + 1) - f(t - 1)) - (f(t + 2) - f(t - 2))) * scale;
        const std::size_t e = nt - 1;
        auto b = [&](std::size_t k) { return f(e - k) - f(e); };
        out(e - 1, x) = (10.0 * b(1) - 18.0 * b(2) + 6.0 * b(3) - b(4)) * scale;
        out(e, x) = (-48.0 * b(1) + 36.0 * b(2) - 16.0 * b(3) + 3.0 * b(4)) * scale;
    }
    return out;
}

}  // namespace frontlearn::numerics
