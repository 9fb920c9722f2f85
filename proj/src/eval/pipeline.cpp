#include "frontlearn/eval/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "frontlearn/analytic/interface_models.hpp"
#include "frontlearn/errors.hpp"
#include "frontlearn/eval/trajectory_io.hpp"
#include "frontlearn/nn/mlp.hpp"
#include "frontlearn/numerics/rng.hpp"
#include "frontlearn/surrogate/surrogate.hpp"

namespace frontlearn::eval {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTestStream = 1'000'000;
constexpr std::uint64_t kTrainStream = 2'000'000;
constexpr std::uint64_t kRetryStride = 10'000;
constexpr int kMaxAttempts = 3;

std::string train_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "train_%02zu.ftrj", k);
    return buf;
}

std::size_t worker_count(const ExperimentConfig& cfg, std::size_t jobs) {
    std::size_t n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs job(i) for i in [0, jobs) on a small pool; rethrows the first error.
template <class Job>
void parallel_for(std::size_t jobs, std::size_t workers, Job&& job) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    auto run = [&] {
        for (std::size_t i; (i = next++) < jobs;) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) first = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (first) std::rethrow_exception(first);
}

LogFn locked(const LogFn& log, std::mutex& mu) {
    return [&log, &mu](std::string_view msg) {
        if (!log) return;
        std::lock_guard lock(mu);
        log(msg);
    };
}

nn::TrainConfig seeded_train_config(const ExperimentConfig& cfg, surrogate::SurrogateKind kind) {
    nn::TrainConfig t = cfg.train;
    const auto k = static_cast<std::uint64_t>(kind);
    t.shuffle_seed = numerics::derive_seed(cfg.seed, kTrainStream + 2 * k);
    t.init_seed = numerics::derive_seed(cfg.seed, kTrainStream + 2 * k + 1);
    return t;
}

void write_history(const nn::TrainHistory& h, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "epoch,train_mse,validation_mse\n";
    for (std::size_t e = 0; e < h.train_mse.size(); ++e)
        out << e << ',' << format_double(h.train_mse[e]) << ',' << format_double(h.validation_mse[e]) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::uint64_t train_seed(std::uint64_t master, std::size_t k) { return numerics::derive_seed(master, k); }
std::uint64_t test_seed(std::uint64_t master) { return numerics::derive_seed(master, kTestStream); }

phasefield::FrontTrajectory generate_trajectory(const phasefield::PhaseFieldParams& p, std::uint64_t seed,
                                                const numerics::OdeSolverConfig& solver) {
    numerics::Rng rng(seed);
    const auto h0 = phasefield::random_front(rng, p.L, p.n_x);
    const auto phi0 = phasefield::lift_front(h0, p);

    phasefield::FrontTrajectory traj;
    traj.L = p.L;
    traj.times = p.save_times();
    traj.profiles = Matrix(p.n_save, p.n_x);
    phasefield::simulate_phase_field(phi0, solver, [&](std::size_t k, const phasefield::PhaseField2D& snap) {
        const auto front = phasefield::extract_front(snap);
        std::copy(front.h.begin(), front.h.end(), traj.profiles.row(k).begin());
    });
    return traj;
}

fs::path run_generate(const ExperimentConfig& cfg, const LogFn& log) {
    cfg.validate();
    const fs::path dir = cfg.out_dir / "data";
    fs::create_directories(dir);
    std::mutex log_mu;
    const auto say = locked(log, log_mu);

    const std::size_t jobs = cfg.n_train + 1;
    parallel_for(jobs, worker_count(cfg, jobs), [&](std::size_t j) {
        const bool is_test = j == cfg.n_train;
        const std::string name = is_test ? "test.ftrj" : train_name(j);
        for (int attempt = 0;; ++attempt) {
            const std::uint64_t stream = (is_test ? kTestStream : j) + kRetryStride * static_cast<std::uint64_t>(attempt);
            const std::uint64_t seed = numerics::derive_seed(cfg.seed, stream);
            try {
                const auto traj = generate_trajectory(cfg.phase, seed, cfg.solver);
                write_trajectory(traj, dir / name);
                say(name + ": done (seed " + std::to_string(seed) + ")");
                return;
            } catch (const ExtractionFailure& e) {
                say(name + ": front extraction failed for seed " + std::to_string(seed) + ": " + e.what());
                if (attempt + 1 >= kMaxAttempts) throw;
            }
        }
    });

    write_config(cfg, dir / "dataset.cfg");
    return dir;
}

std::vector<phasefield::FrontTrajectory> load_training_set(const fs::path& data_dir) {
    std::vector<phasefield::FrontTrajectory> out;
    for (std::size_t k = 0; fs::exists(data_dir / train_name(k)); ++k) out.push_back(read_trajectory(data_dir / train_name(k)));
    if (out.empty()) throw InvalidInput("no training trajectories in " + data_dir.string());
    return out;
}

phasefield::FrontTrajectory load_test_trajectory(const fs::path& data_dir) {
    const fs::path p = data_dir / "test.ftrj";
    if (!fs::exists(p)) throw InvalidInput("no test trajectory in " + data_dir.string());
    return read_trajectory(p);
}

nn::TrainResult run_train(const fs::path& data_dir, surrogate::SurrogateKind kind, const ExperimentConfig& cfg,
                          const LogFn& log) {
    cfg.validate();
    const auto trajectories = load_training_set(data_dir);
    auto table = surrogate::assemble_features(trajectories, kind, cfg.phase.a, cfg.phase.D);
    if (cfg.train_rows)
        table = surrogate::subsample(table, cfg.train_rows, numerics::derive_seed(cfg.seed, kTrainStream + 100));
    const std::string name(surrogate::kind_name(kind));
    if (log) log(name + ": " + std::to_string(table.size()) + " training rows");

    const auto tcfg = seeded_train_config(cfg, kind);
    auto result = nn::train(table.inputs, table.target, tcfg, [&](std::size_t e, double tr, double va) {
        if (log) log(name + " epoch " + std::to_string(e) + ": train " + format_double(tr) + ", validation " + format_double(va));
    });

    const fs::path models = cfg.out_dir / "models";
    fs::create_directories(models);
    nn::save_model(result.model, models / (name + ".mlp"));
    write_history(result.history, models / (name + "_history.csv"));
    return result;
}

std::vector<ModelOutcome> run_evaluate(const fs::path& data_dir, const fs::path& models_dir,
                                       const ExperimentConfig& cfg, const LogFn& log) {
    cfg.validate();
    const auto truth = load_test_trajectory(data_dir);
    const phasefield::FrontProfile h0 = truth.at(0);
    const double T = truth.times.back();
    const std::size_t n_save = truth.n_t();
    const double a = cfg.phase.a, D = cfg.phase.D;

    struct Job {
        std::string label;
        std::optional<surrogate::SurrogateSpec> spec;
        analytic::InterfaceModel analytic_kind = analytic::InterfaceModel::eikonal;
    };
    std::vector<Job> jobs{{"eikonal", std::nullopt, analytic::InterfaceModel::eikonal},
                          {"kpz", std::nullopt, analytic::InterfaceModel::kpz}};
    for (auto kind : {surrogate::SurrogateKind::blackbox, surrogate::SurrogateKind::additive,
                      surrogate::SurrogateKind::functional}) {
        const fs::path file = models_dir / (std::string(surrogate::kind_name(kind)) + ".mlp");
        if (!fs::exists(file)) continue;
        jobs.push_back({std::string(surrogate::kind_name(kind)), surrogate::SurrogateSpec{kind, nn::load_model(file), a, D}});
    }

    std::mutex log_mu;
    const auto say = locked(log, log_mu);
    std::vector<ModelOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), worker_count(cfg, jobs.size()), [&](std::size_t j) {
        const Job& job = jobs[j];
        outcomes[j].label = job.label;
        try {
            const auto pred = job.spec ? surrogate::integrate_surrogate(*job.spec, h0, T, n_save, cfg.solver)
                                       : analytic::integrate_analytic_front(job.analytic_kind, h0, T, n_save, a, D, cfg.solver);
            outcomes[j].report = compute_error(pred, truth, job.label);
            say(job.label + ": time-averaged error " + format_double(outcomes[j].report->time_mean));
        } catch (const NumericalError& e) {
            outcomes[j].failure = e.what();
            say(job.label + ": failed: " + e.what());
        }
    });

    const fs::path out = cfg.out_dir / "eval";
    fs::create_directories(out);
    double scale = 0.0;
    std::vector<ErrorReport> finished;
    for (const auto& o : outcomes)
        if (o.report) {
            finished.push_back(*o.report);
            for (double v : o.report->abs_error.flat()) scale = std::max(scale, v);
        }
    if (!(scale > 0.0)) scale = 1.0;
    for (const auto& r : finished) {
        export_pgm(r.abs_error, out / (r.label + "_error.pgm"), scale);
        write_error_csv(r, out / (r.label + "_error.csv"));
        phasefield::FrontTrajectory raw{r.times, r.abs_error, truth.L};
        write_trajectory(raw, out / (r.label + "_abs_error.ftrj"));
    }
    write_summary_csv(finished, out / "summary.csv");

    std::ofstream report(out / "report.txt");
    report << "model,time_mean_abs_error,status\n";
    for (const auto& o : outcomes)
        report << o.label << ',' << (o.report ? format_double(o.report->time_mean) : "nan") << ','
               << (o.report ? "ok" : "failed: " + o.failure) << '\n';
    report << "pgm_scale," << format_double(scale) << ",\n";
    return outcomes;
}

std::vector<ModelOutcome> run_pipeline(const ExperimentConfig& cfg, const LogFn& log) {
    const fs::path data = run_generate(cfg, log);
    for (auto kind : {surrogate::SurrogateKind::blackbox, surrogate::SurrogateKind::additive,
                      surrogate::SurrogateKind::functional})
        run_train(data, kind, cfg, log);
    return run_evaluate(data, cfg.out_dir / "models", cfg, log);
}

}  // namespace frontlearn::eval
