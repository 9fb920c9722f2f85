#include "frontlearn/surrogate/surrogate.hpp"

#include <cmath>

#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/stencil.hpp"

namespace frontlearn::surrogate {

SurrogateRhs::SurrogateRhs(const SurrogateSpec& spec, std::size_t n_x, double L)
    : spec_(spec), dx_(L / static_cast<double>(n_x)), u_(n_x), ux_(n_x), uxx_(n_x), f_(n_x),
      features_(3 * n_x), out_(n_x) {
    spec.model.validate();
    if (spec.model.n_inputs() != 3 || spec.model.n_outputs() != 1)
        throw InvalidInput("surrogate models map 3 inputs to 1 output");
    if (n_x < 5) throw InvalidInput("a profile needs at least 5 points");
}

void SurrogateRhs::operator()(std::span<const double> h, std::span<double> dhdt) {
    const std::size_t n = u_.size();
    if (h.size() != n || dhdt.size() != n) throw InvalidInput("profile length does not match the evaluator");
    const numerics::StencilConfig st{5, dx_};

    if (spec_.kind != SurrogateKind::blackbox) kpz_lab_field(h, dx_, spec_.a, spec_.D, f_);
    if (spec_.kind == SurrogateKind::functional)
        std::copy(f_.begin(), f_.end(), u_.begin());
    else
        std::copy(h.begin(), h.end(), u_.begin());
    numerics::fd_first_derivative(u_, st, ux_);
    numerics::fd_second_derivative(u_, st, uxx_);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(u_[i]) || !std::isfinite(ux_[i]) || !std::isfinite(uxx_[i]))
            throw EvaluationError("non-finite surrogate input", i);
        features_[3 * i] = u_[i];
        features_[3 * i + 1] = ux_[i];
        features_[3 * i + 2] = uxx_[i];
    }
    nn::mlp_forward(spec_.model, features_.data(), n, out_, ws_);
    for (std::size_t i = 0; i < n; ++i) {
        dhdt[i] = spec_.kind == SurrogateKind::additive ? f_[i] + out_[i] : out_[i];
        if (!std::isfinite(dhdt[i])) throw EvaluationError("non-finite surrogate output", i);
    }
}

std::vector<double> surrogate_rhs(const SurrogateSpec& spec, const phasefield::FrontProfile& h) {
    SurrogateRhs rhs(spec, h.h.size(), h.L);
    std::vector<double> out(h.h.size());
    rhs(h.h, out);
    return out;
}

phasefield::FrontTrajectory integrate_surrogate(const SurrogateSpec& spec, const phasefield::FrontProfile& h0,
                                                double T, std::size_t n_save,
                                                const numerics::OdeSolverConfig& solver) {
    if (n_save < 2) throw InvalidInput("n_save must be at least 2");
    if (!(T > 0.0)) throw InvalidInput("T must be positive");
    SurrogateRhs eval(spec, h0.h.size(), h0.L);

    phasefield::FrontTrajectory traj;
    traj.L = h0.L;
    traj.times.resize(n_save);
    for (std::size_t k = 0; k < n_save; ++k)
        traj.times[k] = T * static_cast<double>(k) / static_cast<double>(n_save - 1);
    traj.times.back() = T;

    double t_reached = 0.0;
    auto rhs = [&](double t, std::span<const double> h, std::span<double> dhdt) {
        t_reached = t;
        eval(h, dhdt);
    };
    try {
        traj.profiles = numerics::rk45_integrate(rhs, h0.h, 0.0, T, traj.times, solver);
    } catch (const EvaluationError& e) {
        throw IntegrationFailure(std::string("surrogate blew up: ") + e.what(), t_reached);
    }
    return traj;
}

}  // namespace frontlearn::surrogate
