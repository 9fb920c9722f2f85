#include "frontlearn/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "frontlearn/errors.hpp"

namespace frontlearn::numerics {

void OdeSolverConfig::validate() const {
    if (!(rel_tol > 0.0)) throw InvalidInput("rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw InvalidInput("abs_tol must be positive");
    if (!(max_step > 0.0)) throw InvalidInput("max_step must be positive");
    if (initial_step < 0.0) throw InvalidInput("initial_step must be non-negative");
}

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
// b - b_hat
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, dopri5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double rms_scaled(std::span<const double> v, std::span<const double> scale) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = v[i] / scale[i];
        acc += q * q;
    }
    return v.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

OdeStats rk45_integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                        std::span<const double> t_eval, const OdeSolverConfig& cfg,
                        const OdeObserver& observer) {
    cfg.validate();
    if (!(t1 >= t0)) throw InvalidInput("rk45_integrate requires t1 >= t0");
    const double span_tol = 1e-12 * std::max(1.0, std::abs(t1 - t0));
    for (std::size_t i = 0; i < t_eval.size(); ++i) {
        if (t_eval[i] < t0 - span_tol || t_eval[i] > t1 + span_tol)
            throw InvalidInput("t_eval entry outside the integration span");
        if (i > 0 && t_eval[i] < t_eval[i - 1]) throw InvalidInput("t_eval must be sorted");
    }

    const std::size_t n = y0.size();
    OdeStats stats;
    std::vector<double> y(y0.begin(), y0.end()), ynew(n), tmp(n), scale(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), dense(n);

    auto eval = [&](double t, std::span<const double> state, std::vector<double>& out) {
        rhs(t, state, out);
        ++stats.rhs_evals;
    };

    std::size_t next_out = 0;
    double t = t0;
    while (next_out < t_eval.size() && t_eval[next_out] <= t0 + span_tol) {
        observer(next_out, t_eval[next_out], y);
        ++next_out;
    }
    if (next_out == t_eval.size() && t1 == t0) return stats;

    eval(t, y, k1);

    double h = cfg.initial_step;
    if (h == 0.0) {
        for (std::size_t i = 0; i < n; ++i) scale[i] = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        const double dy0 = rms_scaled(y, scale);
        const double df0 = rms_scaled(k1, scale);
        double h0 = (dy0 < 1e-5 || df0 < 1e-5) ? 1e-6 : 0.01 * dy0 / df0;
        h0 = std::min(h0, t1 - t0);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k1[i];
        eval(t + h0, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
        const double ddf = rms_scaled(err, scale) / h0;
        const double denom = std::max(df0, ddf);
        const double h1 = denom <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / denom, 1.0 / 5.0);
        h = std::min(100.0 * h0, h1);
    }
    h = std::min({h, cfg.max_step, t1 - t0});

    bool previous_rejected = false;
    while (t < t1) {
        if (stats.accepted + stats.rejected >= cfg.max_steps)
            throw IntegrationFailure("step budget exhausted", t);
        const double min_step = 10.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (h < min_step) throw IntegrationFailure("step size underflow", t);
        const bool last = t + h >= t1 || t1 - (t + h) < min_step;
        if (last) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        eval(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        eval(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        eval(t + h, ynew, k7);

        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            scale[i] = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        }
        const double err_norm = rms_scaled(err, scale);

        if (!std::isfinite(err_norm) || err_norm > 1.0) {
            ++stats.rejected;
            const double factor =
                std::isfinite(err_norm) ? std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2)) : kMinFactor;
            h *= factor;
            previous_rejected = true;
            continue;
        }

        const double t_new = last ? t1 : t + h;
        bool dense_ready = false;
        while (next_out < t_eval.size() && t_eval[next_out] <= t_new + span_tol) {
            const double te = t_eval[next_out];
            if (te >= t_new) {
                observer(next_out, te, ynew);
            } else {
                if (!dense_ready) {
                    for (std::size_t i = 0; i < n; ++i)
                        dense[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                    dense_ready = true;
                }
                const double theta = (te - t) / h;
                const double theta1 = 1.0 - theta;
                for (std::size_t i = 0; i < n; ++i) {
                    const double r2 = ynew[i] - y[i];
                    const double r3 = h * k1[i] - r2;
                    const double r4 = r2 - h * k7[i] - r3;
                    tmp[i] = y[i] + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * dense[i])));
                }
                observer(next_out, te, tmp);
            }
            ++next_out;
        }

        ++stats.accepted;
        t = t_new;
        std::swap(y, ynew);
        std::swap(k1, k7);

        double factor = err_norm == 0.0 ? kMaxFactor : kSafety * std::pow(err_norm, -0.2);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        if (previous_rejected) factor = std::min(factor, 1.0);
        previous_rejected = false;
        h = std::min(h * factor, cfg.max_step);
    }

    while (next_out < t_eval.size()) {
        observer(next_out, t_eval[next_out], y);
        ++next_out;
    }
    return stats;
}

Matrix rk45_integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      std::span<const double> t_eval, const OdeSolverConfig& cfg) {
    Matrix out(t_eval.size(), y0.size());
    rk45_integrate(rhs, y0, t0, t1, t_eval, cfg, [&](std::size_t k, double, std::span<const double> state) {
        std::copy(state.begin(), state.end(), out.row(k).begin());
    });
    return out;
}

}  // namespace frontlearn::numerics
