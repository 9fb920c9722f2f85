#include "frontlearn/eval/trajectory_io.hpp"

#include <cmath>
#include <cstdint>

#include "frontlearn/binary_io.hpp"
#include "frontlearn/errors.hpp"

namespace frontlearn::eval {

void write_trajectory(const phasefield::FrontTrajectory& traj, const std::filesystem::path& path) {
    traj.validate();
    io::BinaryWriter w(path);
    w.magic("FTRJ");
    w.put(static_cast<std::uint32_t>(traj.n_t()));
    w.put(static_cast<std::uint32_t>(traj.n_x()));
    w.put(traj.L);
    w.put(traj.times.front());
    w.put(traj.dt());
    w.put_f64s(traj.profiles.flat());
    w.close();
}

phasefield::FrontTrajectory read_trajectory(const std::filesystem::path& path) {
    io::BinaryReader r(path);
    r.expect_magic("FTRJ");
    const auto n_t = r.get<std::uint32_t>();
    const auto n_x = r.get<std::uint32_t>();
    const double L = r.get<double>();
    const double t0 = r.get<double>();
    const double dt = r.get<double>();
    if (n_t == 0 || n_x == 0) throw FormatError(path.string() + ": empty trajectory");
    if (!(L > 0.0) || !std::isfinite(t0) || !(dt > 0.0) || !std::isfinite(dt))
        throw FormatError(path.string() + ": invalid grid header");
    const auto expected = std::uint64_t{n_t} * n_x * sizeof(double) + 36;
    if (std::filesystem::file_size(path) != expected) throw FormatError(path.string() + ": size does not match header");

    phasefield::FrontTrajectory traj;
    traj.L = L;
    traj.times.resize(n_t);
    for (std::uint32_t k = 0; k < n_t; ++k) traj.times[k] = t0 + static_cast<double>(k) * dt;
    traj.profiles = Matrix(n_t, n_x);
    r.get_f64s(traj.profiles.flat());
    r.expect_end();
    return traj;
}

}  // namespace frontlearn::eval
