#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frontlearn/nn/mlp.hpp"
#include "frontlearn/numerics/ode.hpp"
#include "frontlearn/phasefield/phasefield.hpp"
#include "frontlearn/surrogate/features.hpp"

namespace frontlearn::surrogate {

struct SurrogateSpec {
    SurrogateKind kind = SurrogateKind::blackbox;
    nn::MlpModel model;
    double a = -0.1;
    double D = 0.1;
};

/// Reusable evaluator for one spec; not safe to share between threads.
class SurrogateRhs {
public:
    SurrogateRhs(const SurrogateSpec& spec, std::size_t n_x, double L);

    /// Lab-frame dh/dt for the periodic profile h. Throws EvaluationError
    /// naming the first x index with a non-finite input or output.
    void operator()(std::span<const double> h, std::span<double> dhdt);

private:
    const SurrogateSpec& spec_;
    double dx_;
    std::vector<double> u_, ux_, uxx_, f_, features_, out_;
    nn::MlpWorkspace ws_;
};

std::vector<double> surrogate_rhs(const SurrogateSpec& spec, const phasefield::FrontProfile& h);

/// Method of lines with DOPRI5; n_save equidistant outputs on [0, T].
/// Blow-up surfaces as IntegrationFailure carrying the time reached.
phasefield::FrontTrajectory integrate_surrogate(const SurrogateSpec& spec, const phasefield::FrontProfile& h0,
                                                double T, std::size_t n_save,
                                                const numerics::OdeSolverConfig& solver = {});

}  // namespace frontlearn::surrogate
