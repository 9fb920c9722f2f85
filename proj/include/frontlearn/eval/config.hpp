#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frontlearn/nn/train.hpp"
#include "frontlearn/numerics/ode.hpp"
#include "frontlearn/phasefield/phasefield.hpp"

namespace frontlearn::eval {

struct ExperimentConfig {
    std::string scale = "ci";
    phasefield::PhaseFieldParams phase;
    std::size_t n_train = 5;
    std::uint64_t seed = 42;
    nn::TrainConfig train;
    /// Rows kept after uniform subsampling of the feature table; 0 keeps all.
    std::size_t train_rows = 0;
    numerics::OdeSolverConfig solver;
    std::filesystem::path out_dir = "frontlearn_out";
    /// Worker threads for generate and evaluate; 0 picks the hardware count.
    std::size_t threads = 0;

    /// "paper" or "ci"; throws InvalidInput for anything else.
    static ExperimentConfig preset(std::string_view scale);

    /// Applies one `key = value` setting; throws InvalidInput on an unknown
    /// key or an unparsable value. "scale" resets everything to that preset.
    void set(std::string_view key, std::string_view value);

    void validate() const;

    /// Every key with its current value, in a stable order.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; anything else without '=' is an error.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Preset from the file's "scale" key (or the ci preset), then the file's
/// remaining keys in order.
ExperimentConfig load_config(const std::filesystem::path& path);

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

}  // namespace frontlearn::eval
