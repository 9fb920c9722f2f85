#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "frontlearn/matrix.hpp"
#include "frontlearn/phasefield/phasefield.hpp"

namespace frontlearn::eval {

struct ErrorReport {
    std::string label;
    std::vector<double> times;
    Matrix abs_error;                  // n_t x n_x, |pred - truth|
    std::vector<double> mean_over_x;   // row means of abs_error
    double time_mean = 0.0;            // mean of mean_over_x
};

/// Throws InvalidInput when the grids or time axes differ.
ErrorReport compute_error(const phasefield::FrontTrajectory& pred, const phasefield::FrontTrajectory& truth,
                          const std::string& label = {});

/// Binary 8-bit greyscale image: value v maps to round-half-up(255 v / scale),
/// clamped to [0, 255]. Rows of the matrix become image rows.
void export_pgm(const Matrix& values, const std::filesystem::path& path, double scale);

/// "time,mean_abs_error" rows for one report.
void write_error_csv(const ErrorReport& report, const std::filesystem::path& path);

/// "time,model,mean_abs_error": every saved time of every report, grouped by model.
void write_summary_csv(std::span<const ErrorReport> reports, const std::filesystem::path& path);

/// Formats a double with 17 significant digits in the classic locale.
std::string format_double(double v);

}  // namespace frontlearn::eval
