#include "frontlearn/surrogate/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "frontlearn/analytic/interface_models.hpp"
#include "frontlearn/binary_io.hpp"
#include "frontlearn/errors.hpp"
#include "frontlearn/numerics/rng.hpp"
#include "frontlearn/numerics/stencil.hpp"

namespace frontlearn::surrogate {

std::string_view kind_name(SurrogateKind kind) {
    switch (kind) {
        case SurrogateKind::blackbox: return "blackbox";
        case SurrogateKind::additive: return "additive";
        case SurrogateKind::functional: return "functional";
    }
    return "unknown";
}

SurrogateKind parse_kind(std::string_view name) {
    if (name == "blackbox") return SurrogateKind::blackbox;
    if (name == "additive") return SurrogateKind::additive;
    if (name == "functional") return SurrogateKind::functional;
    throw InvalidInput("unknown surrogate kind '" + std::string(name) + "'");
}

double kpz_lab_rhs(double h_x, double h_xx, double a, double D) {
    return analytic::kpz_rhs(0.0, h_x, h_xx, a, D) + analytic::front_drift(a, D);
}

void kpz_lab_field(std::span<const double> h, double dx, double a, double D, std::span<double> out) {
    const numerics::StencilConfig st{5, dx};
    std::vector<double> hx(h.size()), hxx(h.size());
    numerics::fd_first_derivative(h, st, hx);
    numerics::fd_second_derivative(h, st, hxx);
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = kpz_lab_rhs(hx[i], hxx[i], a, D);
}

void FeatureTable::validate() const {
    const std::size_t n = target.size();
    if (inputs.rows() != n || inputs.cols() != 3 || traj.size() != n || ti.size() != n || xi.size() != n)
        throw InvalidInput("feature table columns have inconsistent lengths");
    for (double v : inputs.flat())
        if (!std::isfinite(v)) throw InvalidInput("non-finite feature value");
    for (double v : target)
        if (!std::isfinite(v)) throw InvalidInput("non-finite target value");
}

FeatureTable assemble_features(std::span<const phasefield::FrontTrajectory> trajectories, SurrogateKind kind,
                               double a, double D) {
    if (trajectories.empty()) throw InvalidInput("no trajectories to assemble");
    const std::size_t n_x = trajectories.front().n_x();
    const double L = trajectories.front().L;
    std::size_t total = 0;
    for (const auto& tr : trajectories) {
        tr.validate();
        if (tr.n_x() != n_x || tr.L != L) throw InvalidInput("trajectories use different x grids");
        if (tr.n_t() < 5) throw InvalidInput("trajectories need at least 5 snapshots");
        total += tr.n_t() * n_x;
    }

    FeatureTable out;
    out.inputs = Matrix(total, 3);
    out.target.resize(total);
    out.traj.resize(total);
    out.ti.resize(total);
    out.xi.resize(total);

    const numerics::StencilConfig st{5, L / static_cast<double>(n_x)};
    std::vector<double> u(n_x), ux(n_x), uxx(n_x), f(n_x);
    std::size_t row = 0;
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& tr = trajectories[k];
        const Matrix ht = numerics::fd_time_derivative(tr.profiles, tr.dt());
        for (std::size_t t = 0; t < tr.n_t(); ++t) {
            const auto h = tr.profiles.row(t);
            kpz_lab_field(h, st.spacing, a, D, f);
            if (kind == SurrogateKind::functional)
                std::copy(f.begin(), f.end(), u.begin());
            else
                std::copy(h.begin(), h.end(), u.begin());
            numerics::fd_first_derivative(u, st, ux);
            numerics::fd_second_derivative(u, st, uxx);
            for (std::size_t i = 0; i < n_x; ++i, ++row) {
                out.inputs(row, 0) = u[i];
                out.inputs(row, 1) = ux[i];
                out.inputs(row, 2) = uxx[i];
                out.target[row] = kind == SurrogateKind::additive ? ht(t, i) - f[i] : ht(t, i);
                out.traj[row] = static_cast<std::uint32_t>(k);
                out.ti[row] = static_cast<std::uint32_t>(t);
                out.xi[row] = static_cast<std::uint32_t>(i);
            }
        }
    }
    out.validate();
    return out;
}

FeatureTable subsample(const FeatureTable& table, std::size_t n, std::uint64_t seed) {
    if (n >= table.size()) return table;
    std::vector<std::size_t> idx(table.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    numerics::Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(idx));
    idx.resize(n);
    std::sort(idx.begin(), idx.end());

    FeatureTable out;
    out.inputs = Matrix(n, 3);
    out.target.resize(n);
    out.traj.resize(n);
    out.ti.resize(n);
    out.xi.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t s = idx[r];
        for (std::size_t c = 0; c < 3; ++c) out.inputs(r, c) = table.inputs(s, c);
        out.target[r] = table.target[s];
        out.traj[r] = table.traj[s];
        out.ti[r] = table.ti[s];
        out.xi[r] = table.xi[s];
    }
    return out;
}

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path) {
    table.validate();
    const std::size_t n = table.size();
    io::BinaryWriter w(path);
    w.magic("FTAB");
    w.put(static_cast<std::uint64_t>(n));
    std::vector<double> col(n);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = table.inputs(r, c);
        w.put_f64s(col);
    }
    w.put_f64s(table.target);
    for (std::size_t r = 0; r < n; ++r) {
        w.put(table.traj[r]);
        w.put(table.ti[r]);
        w.put(table.xi[r]);
    }
    w.close();
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
    io::BinaryReader r(path);
    r.expect_magic("FTAB");
    const auto n64 = r.get<std::uint64_t>();
    const auto size = std::filesystem::file_size(path);
    // 4 + 8 header bytes, 32 bytes of columns and 12 of provenance per row.
    if (n64 > size / 44) throw FormatError(path.string() + ": row count exceeds file size");
    const auto n = static_cast<std::size_t>(n64);
    FeatureTable t;
    t.inputs = Matrix(n, 3);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < 3; ++c) {
        r.get_f64s(col);
        for (std::size_t i = 0; i < n; ++i) t.inputs(i, c) = col[i];
    }
    t.target.resize(n);
    r.get_f64s(t.target);
    t.traj.resize(n);
    t.ti.resize(n);
    t.xi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.traj[i] = r.get<std::uint32_t>();
        t.ti[i] = r.get<std::uint32_t>();
        t.xi[i] = r.get<std::uint32_t>();
    }
    r.expect_end();
    return t;
}

void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.imbue(std::locale::classic());
    out.precision(17);
    out << "h,h_x,h_xx,target,traj,ti,xi\n";
    for (std::size_t r = 0; r < table.size(); ++r) {
        out << table.inputs(r, 0) << ',' << table.inputs(r, 1) << ',' << table.inputs(r, 2) << ','
            << table.target[r] << ',' << table.traj[r] << ',' << table.ti[r] << ',' << table.xi[r] << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace frontlearn::surrogate
