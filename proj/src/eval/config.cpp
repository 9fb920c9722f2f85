#include "frontlearn/eval/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "frontlearn/errors.hpp"
#include "frontlearn/eval/error_report.hpp"

namespace frontlearn::eval {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw InvalidInput("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
    return out;
}

double parse_double(std::string_view key, std::string_view value) { return parse_number<double>(key, value); }
std::size_t parse_size(std::string_view key, std::string_view value) { return parse_number<std::size_t>(key, value); }
std::uint64_t parse_u64(std::string_view key, std::string_view value) { return parse_number<std::uint64_t>(key, value); }

}  // namespace

ExperimentConfig ExperimentConfig::preset(std::string_view scale) {
    ExperimentConfig c;
    if (scale == "paper") {
        c.scale = "paper";
        c.phase.n_x = 400;
        c.phase.n_y = 400;
        c.phase.n_save = 500;
        c.n_train = 20;
        c.train.epochs = 50;
    } else if (scale == "ci") {
        c.scale = "ci";
        c.phase.n_x = 256;
        c.phase.n_y = 800;
        c.phase.n_save = 200;
        c.n_train = 20;
        c.train_rows = 256000;
        c.train.epochs = 20;
    } else {
        throw InvalidInput("unknown scale '" + std::string(scale) + "' (expected paper or ci)");
    }
    return c;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
    if (key == "scale") {
        const auto keep_seed = seed;
        const auto keep_out = out_dir;
        *this = preset(value);
        seed = keep_seed;
        out_dir = keep_out;
    } else if (key == "seed") {
        seed = parse_u64(key, value);
    } else if (key == "out") {
        if (value.empty()) throw InvalidInput("config key 'out' is empty");
        out_dir = std::string(value);
    } else if (key == "a") {
        phase.a = parse_double(key, value);
    } else if (key == "D") {
        phase.D = parse_double(key, value);
    } else if (key == "L") {
        phase.L = parse_double(key, value);
    } else if (key == "n_x") {
        phase.n_x = parse_size(key, value);
    } else if (key == "n_y") {
        phase.n_y = parse_size(key, value);
    } else if (key == "T") {
        phase.T = parse_double(key, value);
    } else if (key == "n_save") {
        phase.n_save = parse_size(key, value);
    } else if (key == "n_train") {
        n_train = parse_size(key, value);
    } else if (key == "train_rows") {
        train_rows = parse_size(key, value);
    } else if (key == "learning_rate") {
        train.learning_rate = parse_double(key, value);
    } else if (key == "batch_size") {
        train.batch_size = parse_size(key, value);
    } else if (key == "epochs") {
        train.epochs = parse_size(key, value);
    } else if (key == "validation_fraction") {
        train.validation_fraction = parse_double(key, value);
    } else if (key == "final_lr_fraction") {
        train.final_lr_fraction = parse_double(key, value);
    } else if (key == "rel_tol") {
        solver.rel_tol = parse_double(key, value);
    } else if (key == "abs_tol") {
        solver.abs_tol = parse_double(key, value);
    } else if (key == "threads") {
        threads = parse_size(key, value);
    } else {
        throw InvalidInput("unknown config key '" + std::string(key) + "'");
    }
}

void ExperimentConfig::validate() const {
    phase.validate();
    train.validate();
    solver.validate();
    if (n_train == 0) throw InvalidInput("n_train must be positive");
    if (phase.n_save < 5) throw InvalidInput("n_save must be at least 5 for the time stencil");
    if (out_dir.empty()) throw InvalidInput("output directory is empty");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
    return {
        {"scale", scale},
        {"seed", std::to_string(seed)},
        {"out", out_dir.string()},
        {"a", format_double(phase.a)},
        {"D", format_double(phase.D)},
        {"L", format_double(phase.L)},
        {"n_x", std::to_string(phase.n_x)},
        {"n_y", std::to_string(phase.n_y)},
        {"T", format_double(phase.T)},
        {"n_save", std::to_string(phase.n_save)},
        {"n_train", std::to_string(n_train)},
        {"train_rows", std::to_string(train_rows)},
        {"learning_rate", format_double(train.learning_rate)},
        {"batch_size", std::to_string(train.batch_size)},
        {"epochs", std::to_string(train.epochs)},
        {"validation_fraction", format_double(train.validation_fraction)},
        {"final_lr_fraction", format_double(train.final_lr_fraction)},
        {"rel_tol", format_double(solver.rel_tol)},
        {"abs_tol", format_double(solver.abs_tol)},
        {"threads", std::to_string(threads)},
    };
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw InvalidInput("config line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    const auto kv = read_config_file(path);
    ExperimentConfig cfg = ExperimentConfig::preset("ci");
    for (const auto& [k, v] : kv)
        if (k == "scale") cfg.set(k, v);
    for (const auto& [k, v] : kv)
        if (k != "scale") cfg.set(k, v);
    return cfg;
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : cfg.entries()) out << k << " = " << v << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace frontlearn::eval
