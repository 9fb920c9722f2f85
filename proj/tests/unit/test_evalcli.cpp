#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "frontlearn/errors.hpp"
#include "frontlearn/eval/config.hpp"
#include "frontlearn/eval/error_report.hpp"
#include "frontlearn/eval/trajectory_io.hpp"

using namespace frontlearn;
using namespace frontlearn::eval;
namespace fs = std::filesystem;

namespace {

phasefield::FrontTrajectory make_traj(std::size_t nt, std::size_t nx, double fill = 0.0) {
    phasefield::FrontTrajectory t;
    t.L = 90.0;
    t.profiles = Matrix(nt, nx);
    for (std::size_t k = 0; k < nt; ++k) t.times.push_back(0.5 * static_cast<double>(k));
    for (double& v : t.profiles.flat()) v = fill;
    return t;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("frontlearn_evalcli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRONTLEARN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path tiny_config(const fs::path& dir) {
    const auto path = dir / "tiny.cfg";
    std::ofstream(path) << "# small enough for a unit test\n"
                           "scale = ci\n"
                           "n_x = 32\n"
                           "n_y = 200\n"
                           "T = 1\n"
                           "n_save = 6\n"
                           "n_train = 2\n"
                           "epochs = 2\n"
                           "batch_size = 64\n"
                           "threads = 2\n";
    return path;
}

}  // namespace

TEST_CASE("compute_error examples") {
    const auto a = make_traj(4, 8, 3.0);
    const auto same = compute_error(a, a);
    CHECK(same.time_mean == 0.0);
    for (double v : same.abs_error.flat()) CHECK(v == 0.0);

    const auto shifted = compute_error(make_traj(4, 8, 3.25), a);
    CHECK(shifted.time_mean == 0.25);

    auto p = make_traj(2, 2), t = make_traj(2, 2);
    p.profiles(0, 1) = 1.0;
    p.profiles(1, 0) = -2.0;
    p.profiles(1, 1) = 3.0;
    const auto r = compute_error(p, t, "x");
    CHECK(r.label == "x");
    CHECK(r.mean_over_x == std::vector<double>{0.5, 2.5});
    CHECK(r.time_mean == 1.5);

    CHECK_THROWS_AS(compute_error(make_traj(4, 8), make_traj(4, 9)), InvalidInput);
    CHECK_THROWS_AS(compute_error(make_traj(4, 8), make_traj(5, 8)), InvalidInput);
    auto late = make_traj(4, 8);
    for (double& v : late.times) v += 0.1;
    CHECK_THROWS_AS(compute_error(late, make_traj(4, 8)), InvalidInput);
}

TEST_CASE("PGM export scaling") {
    Matrix m(2, 3);
    m(0, 0) = 0.0;
    m(0, 1) = 2.0;
    m(0, 2) = 1.0;
    m(1, 0) = 5.0;
    m(1, 1) = -1.0;
    m(1, 2) = 0.5;
    const auto dir = scratch("pgm");
    export_pgm(m, dir / "e.pgm", 2.0);
    const auto bytes = slurp(dir / "e.pgm");
    const std::string header = "P5\n3 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 6);
    CHECK(bytes.substr(0, header.size()) == header);
    const auto px = [&](std::size_t i) { return static_cast<unsigned char>(bytes[header.size() + i]); };
    CHECK(px(0) == 0);
    CHECK(px(1) == 255);
    CHECK(px(2) == 128);
    CHECK(px(3) == 255);
    CHECK(px(4) == 0);
    CHECK(px(5) == 64);
    CHECK_THROWS_AS(export_pgm(m, dir / "bad.pgm", 0.0), InvalidInput);
}

TEST_CASE("error and summary CSV") {
    auto p = make_traj(3, 4, 1.0), t = make_traj(3, 4);
    const std::vector<ErrorReport> reports{compute_error(p, t, "eikonal"), compute_error(t, t, "kpz")};
    const auto dir = scratch("csv");
    write_summary_csv(reports, dir / "summary.csv");
    std::istringstream s(slurp(dir / "summary.csv"));
    std::string line;
    std::getline(s, line);
    CHECK(line == "time,model,mean_abs_error");
    std::getline(s, line);
    CHECK(line == "0,eikonal,1");
    std::size_t rows = 1;
    while (std::getline(s, line)) ++rows;
    CHECK(rows == 6);
    write_error_csv(reports[0], dir / "e.csv");
    CHECK(slurp(dir / "e.csv") == "time,mean_abs_error\n0,1\n0.5,1\n1,1\n");
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("trajectory files") {
    auto t = make_traj(5, 7);
    for (std::size_t i = 0; i < t.profiles.size(); ++i) t.profiles.data()[i] = std::sin(static_cast<double>(i));
    const auto dir = scratch("ftrj");
    write_trajectory(t, dir / "t.ftrj");
    const auto back = read_trajectory(dir / "t.ftrj");
    CHECK(back.profiles == t.profiles);
    CHECK(back.times == t.times);
    CHECK(back.L == t.L);
    fs::resize_file(dir / "t.ftrj", fs::file_size(dir / "t.ftrj") - 1);
    CHECK_THROWS_AS(read_trajectory(dir / "t.ftrj"), FormatError);
    std::ofstream(dir / "junk.ftrj") << "not a trajectory at all, just some text";
    CHECK_THROWS_AS(read_trajectory(dir / "junk.ftrj"), FormatError);
}

TEST_CASE("configuration presets and overrides") {
    const auto paper = ExperimentConfig::preset("paper");
    CHECK(paper.phase.n_x == 400);
    CHECK(paper.phase.n_y == 400);
    CHECK(paper.phase.n_save == 500);
    CHECK(paper.n_train == 20);
    CHECK(paper.train.epochs == 50);
    CHECK(paper.phase.T == 25.0);
    const auto ci = ExperimentConfig::preset("ci");
    CHECK(ci.phase.n_x == 256);
    CHECK(ci.phase.n_save == 200);
    CHECK_THROWS_AS(ExperimentConfig::preset("huge"), InvalidInput);

    auto c = ExperimentConfig::preset("ci");
    c.set("seed", "7");
    c.set("out", "elsewhere");
    c.set("scale", "paper");
    CHECK(c.phase.n_x == 400);
    CHECK(c.seed == 7);
    CHECK(c.out_dir == fs::path("elsewhere"));
    CHECK_THROWS_AS(c.set("n_x", "many"), InvalidInput);
    CHECK_THROWS_AS(c.set("n_x", "12abc"), InvalidInput);
    CHECK_THROWS_AS(c.set("colour", "1"), InvalidInput);

    const auto kv = parse_config_text("# comment\n\n  a = -0.2 \nT=3\n");
    REQUIRE(kv.size() == 2);
    CHECK(kv[0] == std::pair<std::string, std::string>{"a", "-0.2"});
    CHECK(kv[1] == std::pair<std::string, std::string>{"T", "3"});
    CHECK_THROWS_AS(parse_config_text("just words\n"), InvalidInput);

    const auto dir = scratch("cfg");
    auto w = ExperimentConfig::preset("ci");
    w.set("epochs", "3");
    w.set("learning_rate", "0.0005");
    write_config(w, dir / "w.cfg");
    const auto r = load_config(dir / "w.cfg");
    CHECK(r.entries() == w.entries());
}

TEST_CASE("CLI exit codes") {
    const auto dir = scratch("codes");
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("bogus") == 2);
    std::ofstream(dir / "bad.cfg") << "n_x = lots\n";
    CHECK(run_cli("generate --config " + (dir / "bad.cfg").string()) == 2);
    CHECK(run_cli("generate --config " + (dir / "missing.cfg").string()) == 2);
    CHECK(run_cli("generate --set n_save=2 --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("evaluate -q --data " + (dir / "nothing").string() + " --out " + (dir / "o").string()) == 2);
}

TEST_CASE("tiny end-to-end run through the CLI is deterministic") {
    const auto dir = scratch("e2e");
    const auto cfg = tiny_config(dir);
    const auto out1 = dir / "run1", out2 = dir / "run2";
    REQUIRE(run_cli("generate -q --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(fs::exists(out1 / "data" / "train_00.ftrj"));
    REQUIRE(fs::exists(out1 / "data" / "train_01.ftrj"));
    REQUIRE(fs::exists(out1 / "data" / "test.ftrj"));
    REQUIRE(run_cli("train -q --kind blackbox --kind additive --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(fs::exists(out1 / "models" / "blackbox.mlp"));
    REQUIRE(fs::exists(out1 / "models" / "additive_history.csv"));
    CHECK_FALSE(fs::exists(out1 / "models" / "functional.mlp"));
    REQUIRE(run_cli("evaluate -q --config " + cfg.string() + " --out " + out1.string()) == 0);

    const auto eval = out1 / "eval";
    for (const char* m : {"eikonal", "kpz", "blackbox", "additive"}) {
        CHECK(fs::exists(eval / (std::string(m) + "_error.pgm")));
        CHECK(fs::exists(eval / (std::string(m) + "_error.csv")));
    }

    // Summary rows are the x-means of the raw error matrices.
    std::map<std::string, phasefield::FrontTrajectory> raw;
    for (const char* m : {"eikonal", "kpz", "blackbox", "additive"})
        raw[m] = read_trajectory(eval / (std::string(m) + "_abs_error.ftrj"));
    std::istringstream s(slurp(eval / "summary.csv"));
    std::string line;
    std::getline(s, line);
    std::map<std::string, std::size_t> seen;
    while (std::getline(s, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        const double t = std::stod(line.substr(0, c1));
        const std::string model = line.substr(c1 + 1, c2 - c1 - 1);
        const double mean = std::stod(line.substr(c2 + 1));
        REQUIRE(raw.count(model) == 1);
        const auto& m = raw[model];
        const std::size_t k = seen[model]++;
        CHECK(m.times[k] == doctest::Approx(t).epsilon(1e-15));
        double sum = 0.0;
        for (double v : m.profiles.row(k)) sum += v;
        CHECK(std::abs(sum / static_cast<double>(m.n_x()) - mean) <= 1e-12);
    }
    for (const auto& [model, count] : seen) CHECK(count == 6);

    REQUIRE(run_cli("pipeline -q --config " + cfg.string() + " --out " + out2.string()) == 0);
    REQUIRE(run_cli("pipeline -q --config " + cfg.string() + " --out " + (dir / "run3").string()) == 0);
    CHECK(slurp(out2 / "eval" / "summary.csv") == slurp(dir / "run3" / "eval" / "summary.csv"));
    CHECK(slurp(out2 / "models" / "functional.mlp") == slurp(dir / "run3" / "models" / "functional.mlp"));
    CHECK(slurp(out1 / "data" / "test.ftrj") == slurp(out2 / "data" / "test.ftrj"));
    fs::remove_all(dir);
}
