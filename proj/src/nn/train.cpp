#include "frontlearn/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/rng.hpp"

namespace frontlearn::nn {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidInput("learning_rate must be positive");
    if (batch_size == 0) throw InvalidInput("batch_size must be positive");
    if (epochs == 0) throw InvalidInput("epochs must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) throw InvalidInput("Adam betas must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw InvalidInput("Adam epsilon must be positive");
    if (!(validation_fraction >= 0.0 && validation_fraction < 0.5))
        throw InvalidInput("validation_fraction must lie in [0, 0.5)");
    if (!(final_lr_fraction > 0.0 && final_lr_fraction <= 1.0))
        throw InvalidInput("final_lr_fraction must lie in (0, 1]");
    if (layer_dims.size() < 2) throw InvalidInput("layer_dims needs at least two entries");
}

namespace {

constexpr std::size_t kEvalChunk = 4096;

void gather(const Matrix& features, std::span<const double> targets, std::span<const std::size_t> rows,
            std::vector<double>& x, std::vector<double>& y) {
    const std::size_t nin = features.cols();
    x.resize(rows.size() * nin);
    y.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = features.row(rows[i]);
        std::copy(src.begin(), src.end(), x.begin() + static_cast<std::ptrdiff_t>(i * nin));
        y[i] = targets[rows[i]];
    }
}

void set_normalization(MlpModel& model, const Matrix& features, std::span<const std::size_t> rows) {
    const std::size_t nin = features.cols();
    std::vector<double> mean(nin, 0.0), var(nin, 0.0);
    for (std::size_t r : rows)
        for (std::size_t f = 0; f < nin; ++f) mean[f] += features(r, f);
    for (double& m : mean) m /= static_cast<double>(rows.size());
    for (std::size_t r : rows)
        for (std::size_t f = 0; f < nin; ++f) {
            const double d = features(r, f) - mean[f];
            var[f] += d * d;
        }
    for (std::size_t f = 0; f < nin; ++f) {
        const double sd = std::sqrt(var[f] / static_cast<double>(rows.size()));
        // A constant column carries no information; leave it unscaled.
        model.input_std[f] = sd > 0.0 ? sd : 1.0;
        model.input_mean[f] = mean[f];
    }
}

}  // namespace

double evaluate_mse(const MlpModel& model, const Matrix& features, std::span<const double> targets,
                    std::span<const std::size_t> rows, MlpWorkspace& ws) {
    if (rows.empty()) return 0.0;
    std::vector<double> x, y, out;
    double sum = 0.0;
    for (std::size_t b = 0; b < rows.size(); b += kEvalChunk) {
        const auto chunk = rows.subspan(b, std::min(kEvalChunk, rows.size() - b));
        gather(features, targets, chunk, x, y);
        out.resize(chunk.size());
        mlp_forward(model, x.data(), chunk.size(), out, ws);
        for (std::size_t i = 0; i < chunk.size(); ++i) sum += (out[i] - y[i]) * (out[i] - y[i]);
    }
    return sum / static_cast<double>(rows.size());
}

TrainResult train(const Matrix& features, std::span<const double> targets, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    cfg.validate();
    const std::size_t n = features.rows();
    if (n == 0) throw InvalidInput("no training rows");
    if (targets.size() != n) throw InvalidInput("target count does not match feature rows");
    if (features.cols() != cfg.layer_dims.front() || cfg.layer_dims.back() != 1)
        throw InvalidInput("layer_dims do not match the feature table");
    for (double v : features.flat())
        if (!std::isfinite(v)) throw InvalidInput("non-finite feature");
    for (double v : targets)
        if (!std::isfinite(v)) throw InvalidInput("non-finite target");

    numerics::Rng rng(cfg.shuffle_seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    const auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(n)));
    if (n - n_val == 0) throw InvalidInput("validation split leaves no training rows");
    std::vector<std::size_t> val_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train_rows(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    // Keep the evaluation order independent of the shuffle.
    std::sort(val_rows.begin(), val_rows.end());

    TrainResult result{MlpModel(cfg.layer_dims), {}};
    MlpModel& model = result.model;
    numerics::Rng init_rng(cfg.init_seed);
    model.init_glorot(init_rng);
    set_normalization(model, features, train_rows);

    std::vector<std::size_t> sorted_train = train_rows;
    std::sort(sorted_train.begin(), sorted_train.end());

    MlpWorkspace ws;
    auto record = [&](std::size_t epoch) {
        const double tr = evaluate_mse(model, features, targets, sorted_train, ws);
        const double va = evaluate_mse(model, features, targets, val_rows, ws);
        if (!std::isfinite(tr) || !std::isfinite(va)) throw TrainingDiverged("non-finite loss", epoch);
        result.history.train_mse.push_back(tr);
        result.history.validation_mse.push_back(va);
        if (on_epoch) on_epoch(epoch, tr, va);
    };
    record(0);

    const std::size_t n_train = train_rows.size();
    const std::size_t batch = std::min(cfg.batch_size, n_train);
    const std::size_t steps_per_epoch = (n_train + batch - 1) / batch;
    const double total_steps = static_cast<double>(steps_per_epoch * cfg.epochs);
    AdamState adam(model.n_params());
    std::vector<double> grad(model.n_params()), x, y;
    std::size_t step = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(train_rows));
        for (std::size_t b = 0; b < n_train; b += batch, ++step) {
            const auto rows = std::span<const std::size_t>(train_rows).subspan(b, std::min(batch, n_train - b));
            gather(features, targets, rows, x, y);
            const double loss = mlp_gradient(model, x.data(), y.data(), rows.size(), grad, ws);
            if (!std::isfinite(loss)) throw TrainingDiverged("non-finite batch loss", epoch);
            const double progress = static_cast<double>(step) / total_steps;
            const double scale =
                cfg.final_lr_fraction + (1.0 - cfg.final_lr_fraction) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
            adam_step(model.params(), grad, adam, cfg.adam(cfg.learning_rate * scale));
        }
        record(epoch);
    }
    return result;
}

}  // namespace frontlearn::nn
