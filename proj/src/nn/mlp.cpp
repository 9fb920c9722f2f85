#include "frontlearn/nn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frontlearn/errors.hpp"
#include "frontlearn/simd/kernels.hpp"

namespace frontlearn::nn {

MlpModel::MlpModel(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw InvalidInput("an MLP needs at least an input and an output layer");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        if (dims_[l] == 0 || dims_[l + 1] == 0) throw InvalidInput("layer widths must be positive");
        offsets_.push_back(total);
        total += dims_[l] * dims_[l + 1] + dims_[l + 1];
    }
    params_.assign(total, 0.0);
    input_mean.assign(dims_.front(), 0.0);
    input_std.assign(dims_.front(), 1.0);
}

MlpModel MlpModel::default_architecture() { return MlpModel({3, 96, 96, 96, 96, 1}); }

std::span<double> MlpModel::weights(std::size_t l) noexcept {
    return {params_.data() + offsets_[l], dims_[l] * dims_[l + 1]};
}
std::span<const double> MlpModel::weights(std::size_t l) const noexcept {
    return {params_.data() + offsets_[l], dims_[l] * dims_[l + 1]};
}
std::span<double> MlpModel::biases(std::size_t l) noexcept { return {params_.data() + bias_offset(l), dims_[l + 1]}; }
std::span<const double> MlpModel::biases(std::size_t l) const noexcept {
    return {params_.data() + bias_offset(l), dims_[l + 1]};
}

void MlpModel::init_glorot(numerics::Rng& rng) {
    for (std::size_t l = 0; l < n_layers(); ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(dims_[l] + dims_[l + 1]));
        for (double& w : weights(l)) w = rng.uniform(-bound, bound);
        std::fill(biases(l).begin(), biases(l).end(), 0.0);
    }
}

void MlpModel::validate() const {
    if (dims_.size() < 2) throw InvalidInput("model has no layers");
    if (offsets_.size() != n_layers()) throw InvalidInput("model layer table is inconsistent");
    std::size_t total = 0;
    for (std::size_t l = 0; l < n_layers(); ++l) total += dims_[l] * dims_[l + 1] + dims_[l + 1];
    if (total != params_.size()) throw InvalidInput("parameter count does not match layer dims");
    if (input_mean.size() != n_inputs() || input_std.size() != n_inputs())
        throw InvalidInput("normalization statistics have the wrong size");
    for (double s : input_std)
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("normalization std must be positive and finite");
}

void MlpWorkspace::prepare(const MlpModel& model, std::size_t rows) {
    const auto& dims = model.dims();
    const std::size_t layers = model.n_layers();
    if (act.size() == layers + 1 && act[0].rows() == rows && act[0].cols() == dims[0]) {
        bool same = true;
        for (std::size_t l = 0; l <= layers; ++l) same = same && act[l].cols() == dims[l];
        if (same) return;
    }
    act.assign(layers + 1, Matrix());
    pre.assign(layers, Matrix());
    sig.assign(layers, Matrix());
    for (std::size_t l = 0; l <= layers; ++l) act[l] = Matrix(rows, dims[l]);
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        pre[l] = Matrix(rows, dims[l + 1]);
        sig[l] = Matrix(rows, dims[l + 1]);
    }
}

namespace {

void forward_pass(const MlpModel& model, const double* x, std::size_t rows, MlpWorkspace& ws) {
    const auto& k = simd::kernels();
    const auto& dims = model.dims();
    const std::size_t nin = dims[0];
    ws.prepare(model, rows);

    Matrix& a0 = ws.act[0];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t f = 0; f < nin; ++f) {
            const double v = x[r * nin + f];
            if (!std::isfinite(v)) throw InvalidInput("non-finite feature in row " + std::to_string(r));
            a0(r, f) = (v - model.input_mean[f]) / model.input_std[f];
        }
    }

    const std::size_t layers = model.n_layers();
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t out = dims[l + 1];
        const bool hidden = l + 1 < layers;
        Matrix& z = hidden ? ws.pre[l] : ws.act[l + 1];
        const auto bias = model.biases(l);
        for (std::size_t r = 0; r < rows; ++r) std::copy(bias.begin(), bias.end(), z.row(r).begin());
        k.gemm(rows, out, dims[l], ws.act[l].data(), model.weights(l).data(), z.data(), true);
        if (hidden) k.swish_forward(z.data(), ws.act[l + 1].data(), ws.sig[l].data(), z.size());
    }
}

void transpose(const double* src, std::size_t rows, std::size_t cols, std::vector<double>& dst) {
    dst.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
}

}  // namespace

void mlp_forward(const MlpModel& model, const double* features, std::size_t rows, std::span<double> out,
                 MlpWorkspace& ws) {
    if (out.size() != rows * model.n_outputs()) throw InvalidInput("output buffer has the wrong size");
    forward_pass(model, features, rows, ws);
    const auto& last = ws.act.back();
    std::copy(last.flat().begin(), last.flat().end(), out.begin());
}

Matrix mlp_forward(const MlpModel& model, const Matrix& features) {
    model.validate();
    if (features.cols() != model.n_inputs()) throw InvalidInput("feature width does not match the model");
    Matrix out(features.rows(), model.n_outputs());
    MlpWorkspace ws;
    mlp_forward(model, features.data(), features.rows(), out.flat(), ws);
    return out;
}

double mlp_gradient(const MlpModel& model, const double* features, const double* targets, std::size_t rows,
                    std::span<double> grad, MlpWorkspace& ws) {
    if (grad.size() != model.n_params()) throw InvalidInput("gradient buffer has the wrong size");
    if (rows == 0) throw InvalidInput("gradient of an empty batch");
    forward_pass(model, features, rows, ws);

    const auto& k = simd::kernels();
    const auto& dims = model.dims();
    const std::size_t layers = model.n_layers();
    const std::size_t nout = dims.back();

    // dL/d(out) for L = (1/N) sum (out - t)^2, with N the number of outputs.
    const double inv_n = 1.0 / static_cast<double>(rows * nout);
    const Matrix& out = ws.act.back();
    ws.grad_pre.resize(rows * nout);
    double loss = 0.0;
    for (std::size_t i = 0; i < rows * nout; ++i) {
        const double r = out.data()[i] - targets[i];
        loss += r * r;
        ws.grad_pre[i] = 2.0 * r * inv_n;
    }
    loss *= inv_n;

    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = dims[l];
        const std::size_t width = dims[l + 1];
        double* gw = grad.data() + model.weight_offset(l);
        double* gb = grad.data() + model.bias_offset(l);

        transpose(ws.act[l].data(), rows, in, ws.act_t);
        k.gemm(in, width, rows, ws.act_t.data(), ws.grad_pre.data(), gw, false);
        std::fill(gb, gb + width, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* g = ws.grad_pre.data() + r * width;
            for (std::size_t j = 0; j < width; ++j) gb[j] += g[j];
        }
        if (l == 0) break;

        transpose(model.weights(l).data(), in, width, ws.weight_t);
        ws.grad_act.resize(rows * in);
        k.gemm(rows, in, width, ws.grad_pre.data(), ws.weight_t.data(), ws.grad_act.data(), false);
        ws.grad_pre.resize(rows * in);
        k.swish_backward(ws.pre[l - 1].data(), ws.sig[l - 1].data(), ws.grad_act.data(), ws.grad_pre.data(),
                         rows * in);
    }
    return loss;
}

double mlp_gradient(const MlpModel& model, const Matrix& features, std::span<const double> targets,
                    std::span<double> grad) {
    model.validate();
    if (features.cols() != model.n_inputs()) throw InvalidInput("feature width does not match the model");
    if (targets.size() != features.rows() * model.n_outputs())
        throw InvalidInput("target count does not match feature rows");
    MlpWorkspace ws;
    return mlp_gradient(model, features.data(), targets.data(), features.rows(), grad, ws);
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& s, const AdamConfig& cfg) {
    if (params.size() != grad.size() || s.m.size() != params.size() || s.v.size() != params.size())
        throw InvalidInput("Adam state dimensions do not match the parameters");
    ++s.step;
    const double t = static_cast<double>(s.step);
    const double corr1 = 1.0 - std::pow(cfg.beta1, t);
    const double corr2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        s.m[i] = cfg.beta1 * s.m[i] + (1.0 - cfg.beta1) * grad[i];
        s.v[i] = cfg.beta2 * s.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double m_hat = s.m[i] / corr1;
        const double v_hat = s.v[i] / corr2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

}  // namespace frontlearn::nn
