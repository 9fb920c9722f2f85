#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "frontlearn/matrix.hpp"
#include "frontlearn/numerics/rng.hpp"

namespace frontlearn::nn {

inline double swish(double x) { return x / (1.0 + std::exp(-x)); }

/// Fully connected network: standardized inputs, Swish after every hidden
/// layer, linear output. Parameters live in one flat vector, layer by
/// layer; layer l stores its weights as an (in x out) row-major block
/// followed by `out` biases.
class MlpModel {
public:
    MlpModel() = default;
    /// Zero weights, identity normalization.
    explicit MlpModel(std::vector<std::size_t> dims);

    /// 3 -> 96 -> 96 -> 96 -> 96 -> 1.
    static MlpModel default_architecture();

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t n_layers() const noexcept { return dims_.empty() ? 0 : dims_.size() - 1; }
    std::size_t n_inputs() const noexcept { return dims_.front(); }
    std::size_t n_outputs() const noexcept { return dims_.back(); }
    std::size_t n_params() const noexcept { return params_.size(); }

    std::span<double> params() noexcept { return params_; }
    std::span<const double> params() const noexcept { return params_; }
    std::span<double> weights(std::size_t layer) noexcept;
    std::span<const double> weights(std::size_t layer) const noexcept;
    std::span<double> biases(std::size_t layer) noexcept;
    std::span<const double> biases(std::size_t layer) const noexcept;
    std::size_t weight_offset(std::size_t layer) const noexcept { return offsets_[layer]; }
    std::size_t bias_offset(std::size_t layer) const noexcept {
        return offsets_[layer] + dims_[layer] * dims_[layer + 1];
    }

    std::vector<double> input_mean;
    std::vector<double> input_std;

    /// Uniform(+-sqrt(6 / (fan_in + fan_out))) weights, zero biases.
    void init_glorot(numerics::Rng& rng);

    /// Throws InvalidInput on inconsistent dims or non-positive std.
    void validate() const;

    bool operator==(const MlpModel&) const = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

/// Per-thread scratch buffers for forward and backward passes.
class MlpWorkspace {
public:
    void prepare(const MlpModel& model, std::size_t rows);

    std::vector<Matrix> act;  // act[0] normalized input, act[l] output of layer l
    std::vector<Matrix> pre;  // pre-activations of hidden layers
    std::vector<Matrix> sig;  // cached sigmoids of hidden layers
    // Backward-pass scratch, grown on demand and reused across calls.
    std::vector<double> grad_pre, grad_act, act_t, weight_t;
};

/// Outputs for `rows` feature rows (row-major, n_inputs wide) into `out`
/// (rows x n_outputs). Throws InvalidInput on non-finite features.
void mlp_forward(const MlpModel& model, const double* features, std::size_t rows, std::span<double> out,
                 MlpWorkspace& ws);
Matrix mlp_forward(const MlpModel& model, const Matrix& features);

/// Mean-squared error (1/N) sum (out - target)^2 and its exact gradient with
/// respect to every parameter (written into `grad`, size n_params()).
double mlp_gradient(const MlpModel& model, const double* features, const double* targets, std::size_t rows,
                    std::span<double> grad, MlpWorkspace& ws);
double mlp_gradient(const MlpModel& model, const Matrix& features, std::span<const double> targets,
                    std::span<double> grad);

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, const AdamConfig& cfg);

/// "MLP1" file: u32 layer count, (count + 1) u32 dims, f64 input means and
/// standard deviations, then all parameters in the flat layout above.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace frontlearn::nn
