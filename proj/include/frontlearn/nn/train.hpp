#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "frontlearn/matrix.hpp"
#include "frontlearn/nn/mlp.hpp"

namespace frontlearn::nn {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 1024;
    std::size_t epochs = 50;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t shuffle_seed = 0;
    double validation_fraction = 0.1;
    /// Cosine decay of the step size over the run, ending at
    /// learning_rate * final_lr_fraction. 1 keeps it constant.
    double final_lr_fraction = 0.01;
    /// Seed for the Glorot initialization.
    std::uint64_t init_seed = 1;
    std::vector<std::size_t> layer_dims = {3, 96, 96, 96, 96, 1};

    void validate() const;
    AdamConfig adam(double lr) const { return {lr, beta1, beta2, epsilon}; }
};

/// Entry 0 is measured before the first update, entry e after epoch e.
struct TrainHistory {
    std::vector<double> train_mse;
    std::vector<double> validation_mse;
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
};

/// Called after every epoch with (epoch, train mse, validation mse).
using EpochCallback = std::function<void(std::size_t, double, double)>;

/// Shuffled mini-batch Adam on the mean-squared error. The validation rows
/// are a seeded random subset; normalization statistics come from the
/// remaining training rows only. When fewer training rows than batch_size
/// remain, every step uses the whole training split. Throws
/// TrainingDiverged on a non-finite loss.
TrainResult train(const Matrix& features, std::span<const double> targets, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Mean-squared error of the model over the given rows, evaluated in chunks.
double evaluate_mse(const MlpModel& model, const Matrix& features, std::span<const double> targets,
                    std::span<const std::size_t> rows, MlpWorkspace& ws);

}  // namespace frontlearn::nn
