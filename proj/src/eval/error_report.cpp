#include "frontlearn/eval/error_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frontlearn/errors.hpp"

namespace frontlearn::eval {

std::string format_double(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << v;
    return s.str();
}

ErrorReport compute_error(const phasefield::FrontTrajectory& pred, const phasefield::FrontTrajectory& truth,
                          const std::string& label) {
    if (pred.n_t() != truth.n_t() || pred.n_x() != truth.n_x())
        throw InvalidInput("prediction and truth have different shapes");
    if (pred.times.size() != truth.times.size() || truth.times.size() != truth.n_t())
        throw InvalidInput("time axis length does not match the snapshots");
    const double span = truth.times.empty() ? 0.0 : std::abs(truth.times.back() - truth.times.front());
    const double tol = 1e-9 * std::max(1.0, span);
    for (std::size_t k = 0; k < truth.times.size(); ++k)
        if (std::abs(pred.times[k] - truth.times[k]) > tol) throw InvalidInput("prediction and truth use different times");

    ErrorReport r;
    r.label = label;
    r.times = truth.times;
    r.abs_error = Matrix(truth.n_t(), truth.n_x());
    r.mean_over_x.assign(truth.n_t(), 0.0);
    for (std::size_t t = 0; t < truth.n_t(); ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < truth.n_x(); ++i) {
            const double e = std::abs(pred.profiles(t, i) - truth.profiles(t, i));
            r.abs_error(t, i) = e;
            sum += e;
        }
        r.mean_over_x[t] = truth.n_x() ? sum / static_cast<double>(truth.n_x()) : 0.0;
    }
    double total = 0.0;
    for (double m : r.mean_over_x) total += m;
    r.time_mean = r.mean_over_x.empty() ? 0.0 : total / static_cast<double>(r.mean_over_x.size());
    return r;
}

void export_pgm(const Matrix& values, const std::filesystem::path& path, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("PGM scale must be positive");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "P5\n" << values.cols() << ' ' << values.rows() << "\n255\n";
    std::vector<unsigned char> px(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::floor(255.0 * values.data()[i] / scale + 0.5);
        px[i] = static_cast<unsigned char>(std::isnan(v) ? 255.0 : std::clamp(v, 0.0, 255.0));
    }
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw Error("write failed for " + path.string());
}

void write_error_csv(const ErrorReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "time,mean_abs_error\n";
    for (std::size_t k = 0; k < report.mean_over_x.size(); ++k)
        out << format_double(report.times[k]) << ',' << format_double(report.mean_over_x[k]) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

void write_summary_csv(std::span<const ErrorReport> reports, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "time,model,mean_abs_error\n";
    for (const auto& r : reports)
        for (std::size_t k = 0; k < r.mean_over_x.size(); ++k)
            out << format_double(r.times[k]) << ',' << r.label << ',' << format_double(r.mean_over_x[k]) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace frontlearn::eval
