#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/ode.hpp"
#include "frontlearn/numerics/rng.hpp"
#include "frontlearn/numerics/stencil.hpp"
#include "frontlearn/numerics/tanh_fit.hpp"

using namespace frontlearn;
using namespace frontlearn::numerics;
using std::numbers::pi;

namespace {

constexpr double kL = 90.0;

std::vector<double> sample(std::size_t n, double (*f)(double)) {
    std::vector<double> v(n);
    const double dx = kL / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i) * dx);
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sine(double x) { return std::sin(2 * pi * x / kL); }
double sine_d1(double x) { return 2 * pi / kL * std::cos(2 * pi * x / kL); }
double sine_d2(double x) { return -std::pow(2 * pi / kL, 2) * std::sin(2 * pi * x / kL); }
double cos4(double x) { return std::cos(4 * pi * x / kL); }
double cos4_d1(double x) { return -4 * pi / kL * std::sin(4 * pi * x / kL); }
double two_modes(double x) { return std::sin(2 * pi * x / kL) + 0.3 * std::sin(6 * pi * x / kL + 1.0); }
double two_modes_d2(double x) {
    return -std::pow(2 * pi / kL, 2) * std::sin(2 * pi * x / kL) - 0.3 * std::pow(6 * pi / kL, 2) * std::sin(6 * pi * x / kL + 1.0);
}

StencilConfig grid(std::size_t n) { return {5, kL / static_cast<double>(n)}; }

}  // namespace

TEST_CASE("first derivative of a constant vanishes") {
    const std::vector<double> f(64, 3.7);
    for (double dx : {0.01, 1.0, 7.5}) {
        const auto d = fd_first_derivative(f, StencilConfig{5, dx});
        for (double v : d) CHECK(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("first derivative of sin and cos matches the analytic derivative") {
    const std::size_t n = 400;
    CHECK(max_abs_diff(fd_first_derivative(sample(n, sine), grid(n)), sample(n, sine_d1)) <= 1e-6);
    // 4th-order truncation: (dx^4 / 30) * k^5 for a single mode.
    const double k = 4 * pi / kL, dx = kL / n;
    const double bound = std::pow(dx, 4) / 30.0 * std::pow(k, 5);
    CHECK(max_abs_diff(fd_first_derivative(sample(n, cos4), grid(n)), sample(n, cos4_d1)) <= 1.05 * bound);
}

TEST_CASE("second derivative examples") {
    const std::size_t n = 400;
    const std::vector<double> c(n, -2.0);
    for (double v : fd_second_derivative(c, grid(n))) CHECK(std::abs(v) <= 1e-12);
    CHECK(max_abs_diff(fd_second_derivative(sample(n, sine), grid(n)), sample(n, sine_d2)) <= 1e-7);
    CHECK(max_abs_diff(fd_second_derivative(sample(n, two_modes), grid(n)), sample(n, two_modes_d2)) <= 1e-6);
}

TEST_CASE("stencils converge at fourth order") {
    auto order = [](auto op, double (*f)(double), double (*df)(double)) {
        const double e1 = max_abs_diff(op(sample(200, f), grid(200)), sample(200, df));
        const double e2 = max_abs_diff(op(sample(400, f), grid(400)), sample(400, df));
        return std::log2(e1 / e2);
    };
    auto d1 = [](const std::vector<double>& v, const StencilConfig& c) { return fd_first_derivative(v, c); };
    auto d2 = [](const std::vector<double>& v, const StencilConfig& c) { return fd_second_derivative(v, c); };
    CHECK(order(d1, sine, sine_d1) >= 3.8);
    CHECK(order(d2, sine, sine_d2) >= 3.8);
}

TEST_CASE("stencils are linear") {
    const std::size_t n = 128;
    const auto f = sample(n, sine), g = sample(n, two_modes);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = 2.5 * f[i] - 0.75 * g[i];
    const auto st = grid(n);
    const auto lhs = fd_second_derivative(mix, st);
    const auto ff = fd_second_derivative(f, st), gg = fd_second_derivative(g, st);
    for (std::size_t i = 0; i < n; ++i) CHECK(lhs[i] == doctest::Approx(2.5 * ff[i] - 0.75 * gg[i]).epsilon(1e-12).scale(1e-3));
}

TEST_CASE("stencil preconditions") {
    const std::vector<double> shortv(4, 1.0);
    CHECK_THROWS_AS(fd_first_derivative(shortv, StencilConfig{5, 1.0}), InvalidInput);
    const std::vector<double> v(16, 1.0);
    CHECK_THROWS_AS(fd_first_derivative(v, StencilConfig{5, 0.0}), InvalidInput);
    CHECK_THROWS_AS(fd_first_derivative(v, StencilConfig{4, 1.0}), InvalidInput);
    CHECK_THROWS_AS(fd_second_derivative(v, StencilConfig{1, 1.0}), InvalidInput);
}

TEST_CASE("rk45: zero right-hand side keeps the state") {
    const std::vector<double> y0{1.0, 2.0};
    const std::vector<double> t{0.0, 0.5, 1.0};
    const auto m = rk45_integrate([](double, std::span<const double>, std::span<double> d) { d[0] = d[1] = 0.0; }, y0, 0.0,
                                  1.0, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(m(k, 0) == 1.0);
        CHECK(m(k, 1) == 2.0);
    }
}

TEST_CASE("rk45: analytic solutions") {
    const std::vector<double> one{1.0}, zero{0.0};
    const std::vector<double> t1{1.0}, thalf{pi / 2};
    auto decay = [](double, std::span<const double> y, std::span<double> d) { d[0] = -y[0]; };
    auto cosine = [](double t, std::span<const double>, std::span<double> d) { d[0] = std::cos(t); };
    CHECK(std::abs(rk45_integrate(decay, one, 0.0, 1.0, t1)(0, 0) - 0.3678794) <= 1e-6);
    CHECK(std::abs(rk45_integrate(cosine, zero, 0.0, pi / 2, thalf)(0, 0) - 1.0) <= 1e-6);
}

TEST_CASE("rk45: tightening rel_tol does not increase the error") {
    const std::vector<double> one{1.0};
    const std::vector<double> t{1.0};
    auto decay = [](double, std::span<const double> y, std::span<double> d) { d[0] = -y[0]; };
    double prev = INFINITY;
    for (double tol : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6}) {
        OdeSolverConfig cfg;
        cfg.rel_tol = tol;
        cfg.abs_tol = 1e-12;
        const double err = std::abs(rk45_integrate(decay, one, 0.0, 1.0, t, cfg)(0, 0) - std::exp(-1.0));
        CHECK(err <= prev * (1 + 1e-12));
        prev = err;
    }
}

TEST_CASE("rk45: blow-up raises IntegrationFailure with the last valid time") {
    const std::vector<double> one{1.0};
    const std::vector<double> t{0.0, 2.0};
    // y' = y^2 has y = 1 / (1 - t), singular at t = 1.
    auto quad = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; };
    try {
        rk45_integrate(quad, one, 0.0, 2.0, t);
        FAIL("expected IntegrationFailure");
    } catch (const IntegrationFailure& e) {
        // Error control may carry the last steps slightly across the pole.
        CHECK(std::abs(e.last_time() - 1.0) < 1e-3);
    }
}

TEST_CASE("rk45: dense output hits every requested time") {
    const std::vector<double> one{1.0};
    std::vector<double> t;
    for (int k = 0; k <= 100; ++k) t.push_back(0.03 * k);
    auto decay = [](double, std::span<const double> y, std::span<double> d) { d[0] = -y[0]; };
    const auto m = rk45_integrate(decay, one, 0.0, 3.0, t);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(m(k, 0) - std::exp(-t[k])) <= 1e-6);
}

TEST_CASE("fit_tanh recovers generating parameters") {
    std::vector<double> y(400), phi(400);
    for (std::size_t j = 0; j < y.size(); ++j) {
        y[j] = (static_cast<double>(j) + 0.5) * 90.0 / 400.0;
        phi[j] = std::tanh(0.5 * y[j] - 5.0);
    }
    const auto fit = fit_tanh(y, phi, {0.4, 4.0});
    CHECK(std::abs(fit.c - 0.5) <= 1e-8);
    CHECK(std::abs(fit.d - 5.0) <= 1e-8);
    CHECK(std::abs(fit.crossing() - 10.0) <= 1e-8);
}

TEST_CASE("fit_tanh on a lifted front with the sign-adjusted initial guess") {
    const double D = 0.1, w = std::sqrt(2 * D);
    std::vector<double> y(400), phi(400);
    for (std::size_t j = 0; j < y.size(); ++j) {
        y[j] = (static_cast<double>(j) + 0.5) * 90.0 / 400.0;
        phi[j] = std::tanh((12.0 - y[j]) / w);
    }
    const auto sc = find_sign_change(y, phi);
    REQUIRE(sc.has_value());
    CHECK(sc->decreasing);
    const double c0 = -1.0 / w;
    const auto fit = fit_tanh(y, phi, {c0, c0 * sc->location});
    CHECK(std::abs(std::abs(fit.d / fit.c) - 12.0) <= 1e-6);
    CHECK(std::abs(std::abs(fit.c) - 2.2360680) <= 1e-6);

    // Invariance to tiny zero-mean noise.
    Rng rng(3);
    auto noisy = phi;
    for (double& v : noisy) v += 1e-8 * (2.0 * rng.uniform() - 1.0);
    const auto fit2 = fit_tanh(y, noisy, {c0, c0 * sc->location});
    CHECK(std::abs(fit2.crossing() - fit.crossing()) < 1e-6);
}

TEST_CASE("fit_tanh without a crossing") {
    std::vector<double> y(50), phi(50, 0.9);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = static_cast<double>(j);
    CHECK_THROWS_AS(fit_tanh(y, phi, {1.0, 1.0}), NoFrontCrossing);
}

TEST_CASE("time derivative examples") {
    const std::size_t nt = 40, nx = 7;
    const double dt = 0.05;
    Matrix stat(nt, nx), lin(nt, nx), osc(nt, nx);
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t i = 0; i < nx; ++i) {
            const double g = 1.0 + 0.1 * static_cast<double>(i);
            stat(t, i) = g;
            lin(t, i) = g + 0.04 * dt * static_cast<double>(t);
            osc(t, i) = std::sin(dt * static_cast<double>(t)) * g;
        }
    const auto ds = fd_time_derivative(stat, dt), dl = fd_time_derivative(lin, dt);
    for (double v : ds.flat()) CHECK(v == 0.0);
    for (double v : dl.flat()) CHECK(std::abs(v - 0.04) <= 1e-12);
    const auto d = fd_time_derivative(osc, dt);
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t i = 0; i < nx; ++i) {
            const double exact = std::cos(dt * static_cast<double>(t)) * (1.0 + 0.1 * static_cast<double>(i));
            // One-sided end stencils carry a larger constant than the central one.
            CHECK(std::abs(d(t, i) - exact) <= 0.5 * std::pow(dt, 4) * 1.2);
        }
    CHECK_THROWS_AS(fd_time_derivative(Matrix(4, 3), dt), InvalidInput);
}

TEST_CASE("Rng streams are reproducible and well formed") {
    Rng a(12345), b(12345), c(12346);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        differs = differs || x != c.next();
    }
    CHECK(differs);
    // Reference values of SplitMix64 for seed 0.
    Rng z(0);
    CHECK(z.next() == 0xE220A8397B1DCDAFULL);
    CHECK(z.next() == 0x6E789E6AA1B965F4ULL);
    Rng u(7);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        CHECK((v >= 0.0 && v < 1.0));
        const auto k = u.below(33);
        CHECK(k < 33);
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}
