#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frontlearn/matrix.hpp"
#include "frontlearn/phasefield/phasefield.hpp"

namespace frontlearn::surrogate {

enum class SurrogateKind { blackbox, additive, functional };

std::string_view kind_name(SurrogateKind kind);
/// Accepts "blackbox", "additive" and "functional"; throws InvalidInput otherwise.
SurrogateKind parse_kind(std::string_view name);

/// Lab-frame KPZ closure: D h_xx - a sqrt(D/2) h_x^2 - sqrt(2D) a.
double kpz_lab_rhs(double h_x, double h_xx, double a, double D);

/// kpz_lab_rhs over a periodic profile, derivatives from the 5-point stencils.
void kpz_lab_field(std::span<const double> h, double dx, double a, double D, std::span<double> out);

/// Supervised rows: inputs (n x 3), target, and where each row came from.
struct FeatureTable {
    Matrix inputs;
    std::vector<double> target;
    std::vector<std::uint32_t> traj, ti, xi;

    std::size_t size() const noexcept { return target.size(); }
    /// Throws InvalidInput on mismatched columns or non-finite values.
    void validate() const;
};

/// Rows for every (trajectory, time, x). Blackbox and additive inputs are
/// (h, h_x, h_xx); functional inputs are (f, f_x, f_xx) with f the lab-frame
/// KPZ field. Targets are dh/dt, minus f for the additive kind.
FeatureTable assemble_features(std::span<const phasefield::FrontTrajectory> trajectories, SurrogateKind kind,
                               double a, double D);

/// Uniform random subset of `n` rows without replacement, kept in table order.
/// Returns the table unchanged when n >= size().
FeatureTable subsample(const FeatureTable& table, std::size_t n, std::uint64_t seed);

/// "FTAB": u64 rows, columns h, h_x, h_xx, target as f64, then per row the
/// u32 triplet (traj, ti, xi).
void write_feature_table(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_feature_table(const std::filesystem::path& path);

/// CSV with header h,h_x,h_xx,target,traj,ti,xi.
void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path);

}  // namespace frontlearn::surrogate
