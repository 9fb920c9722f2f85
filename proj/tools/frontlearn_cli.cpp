#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "frontlearn/errors.hpp"
#include "frontlearn/eval/config.hpp"
#include "frontlearn/eval/pipeline.hpp"
#include "frontlearn/simd/kernels.hpp"
#include "frontlearn/surrogate/features.hpp"

namespace fl = frontlearn;
namespace fs = std::filesystem;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string scale;
    std::string out;
    std::vector<std::string> overrides;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "key = value configuration file");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--scale", o.scale, "preset: paper or ci")->check(CLI::IsMember({"paper", "ci"}));
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--set", o.overrides, "extra key=value override (repeatable)");
    cmd->add_flag("-q,--quiet", o.quiet, "suppress progress output");
}

// Preset, then file keys, then command-line flags.
fl::eval::ExperimentConfig resolve(const CommonOptions& o) {
    std::vector<std::pair<std::string, std::string>> file;
    if (!o.config.empty()) file = fl::eval::read_config_file(o.config);
    std::string scale = o.scale;
    if (scale.empty())
        for (const auto& [k, v] : file)
            if (k == "scale") scale = v;
    auto cfg = fl::eval::ExperimentConfig::preset(scale.empty() ? "ci" : scale);
    for (const auto& [k, v] : file)
        if (k != "scale") cfg.set(k, v);
    for (const auto& kv : o.overrides) {
        const auto parsed = fl::eval::parse_config_text(kv);
        if (parsed.size() != 1 || parsed.front().first == "scale")
            throw fl::InvalidInput("--set expects a single key=value other than scale, got '" + kv + "'");
        cfg.set(parsed.front().first, parsed.front().second);
    }
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out.empty()) cfg.out_dir = o.out;
    cfg.validate();
    return cfg;
}

fl::eval::LogFn logger(const CommonOptions& o) {
    if (o.quiet) return {};
    return [](std::string_view msg) { std::cerr << msg << '\n'; };
}

void print_outcomes(const std::vector<fl::eval::ModelOutcome>& outcomes) {
    std::cout << "model,time_mean_abs_error\n";
    for (const auto& o : outcomes) {
        if (o.report)
            std::cout << o.label << ',' << fl::eval::format_double(o.report->time_mean) << '\n';
        else
            std::cout << o.label << ",failed (" << o.failure << ")\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned 1D front dynamics from Allen-Cahn phase-field data"};
    app.require_subcommand(1);

    CommonOptions gen_opt, train_opt, eval_opt, pipe_opt;
    std::string train_data, eval_data, eval_models;
    std::vector<std::string> kinds;

    auto* gen = app.add_subcommand("generate", "simulate training and test trajectories");
    add_common(gen, gen_opt);

    auto* trn = app.add_subcommand("train", "train surrogate networks on a generated dataset");
    add_common(trn, train_opt);
    trn->add_option("--kind", kinds, "blackbox, additive or functional (repeatable; default all)")
        ->check(CLI::IsMember({"blackbox", "additive", "functional"}));
    trn->add_option("--data", train_data, "dataset directory (default <out>/data)");

    auto* evl = app.add_subcommand("evaluate", "integrate all models from the test front and report errors");
    add_common(evl, eval_opt);
    evl->add_option("--data", eval_data, "dataset directory (default <out>/data)");
    evl->add_option("--models", eval_models, "model directory (default <out>/models)");

    auto* pipe = app.add_subcommand("pipeline", "generate, train and evaluate");
    add_common(pipe, pipe_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*gen) {
            const auto cfg = resolve(gen_opt);
            const auto dir = fl::eval::run_generate(cfg, logger(gen_opt));
            std::cout << dir.string() << '\n';
        } else if (*trn) {
            const auto cfg = resolve(train_opt);
            const fs::path data = train_data.empty() ? cfg.out_dir / "data" : fs::path(train_data);
            if (kinds.empty()) kinds = {"blackbox", "additive", "functional"};
            for (const auto& k : kinds) {
                const auto result = fl::eval::run_train(data, fl::surrogate::parse_kind(k), cfg, logger(train_opt));
                std::cout << k << ": final validation mse "
                          << fl::eval::format_double(result.history.validation_mse.back()) << '\n';
            }
        } else if (*evl) {
            const auto cfg = resolve(eval_opt);
            const fs::path data = eval_data.empty() ? cfg.out_dir / "data" : fs::path(eval_data);
            const fs::path models = eval_models.empty() ? cfg.out_dir / "models" : fs::path(eval_models);
            print_outcomes(fl::eval::run_evaluate(data, models, cfg, logger(eval_opt)));
        } else if (*pipe) {
            const auto cfg = resolve(pipe_opt);
            if (!pipe_opt.quiet)
                std::cerr << "kernels: " << fl::simd::isa_name(fl::simd::kernels().isa) << '\n';
            print_outcomes(fl::eval::run_pipeline(cfg, logger(pipe_opt)));
        }
    } catch (const fl::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const fl::FormatError& e) {
        std::cerr << "bad file: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const fl::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
