#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frontlearn/eval/config.hpp"
#include "frontlearn/eval/error_report.hpp"
#include "frontlearn/nn/train.hpp"
#include "frontlearn/phasefield/phasefield.hpp"
#include "frontlearn/surrogate/features.hpp"

namespace frontlearn::eval {

using LogFn = std::function<void(std::string_view)>;

/// Seed of training trajectory k, and of the held-out test trajectory.
/// The test stream index lies far outside the training range.
std::uint64_t train_seed(std::uint64_t master, std::size_t k);
std::uint64_t test_seed(std::uint64_t master);

/// Simulates one phase field from random_front(seed) and extracts its fronts.
phasefield::FrontTrajectory generate_trajectory(const phasefield::PhaseFieldParams& p, std::uint64_t seed,
                                                const numerics::OdeSolverConfig& solver);

/// Writes <out>/data/train_XX.ftrj, <out>/data/test.ftrj and
/// <out>/data/dataset.cfg. Returns the data directory.
std::filesystem::path run_generate(const ExperimentConfig& cfg, const LogFn& log = {});

std::vector<phasefield::FrontTrajectory> load_training_set(const std::filesystem::path& data_dir);
phasefield::FrontTrajectory load_test_trajectory(const std::filesystem::path& data_dir);

/// Assembles features from the training trajectories, trains, and writes
/// <out>/models/<kind>.mlp plus <kind>_history.csv.
nn::TrainResult run_train(const std::filesystem::path& data_dir, surrogate::SurrogateKind kind,
                          const ExperimentConfig& cfg, const LogFn& log = {});

struct ModelOutcome {
    std::string label;
    std::optional<ErrorReport> report;
    std::string failure;  // set when the model could not be integrated
};

/// Integrates eikonal, KPZ and every surrogate with a model file in
/// models_dir from the test trajectory's first frame. Writes per-model
/// heatmap (PGM), raw error matrix (FTRJ layout) and mean-error CSV under
/// <out>/eval, and summary.csv for every model that finished.
std::vector<ModelOutcome> run_evaluate(const std::filesystem::path& data_dir, const std::filesystem::path& models_dir,
                                       const ExperimentConfig& cfg, const LogFn& log = {});

/// generate, train all three kinds, evaluate.
std::vector<ModelOutcome> run_pipeline(const ExperimentConfig& cfg, const LogFn& log = {});

}  // namespace frontlearn::eval
