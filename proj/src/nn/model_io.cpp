#include <cstdint>
#include <limits>

#include "frontlearn/binary_io.hpp"
#include "frontlearn/errors.hpp"
#include "frontlearn/nn/mlp.hpp"

namespace frontlearn::nn {

namespace {
constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1u << 16;
}  // namespace

void save_model(const MlpModel& model, const std::filesystem::path& path) {
    model.validate();
    io::BinaryWriter w(path);
    w.magic("MLP1");
    w.put(static_cast<std::uint32_t>(model.n_layers()));
    for (std::size_t d : model.dims()) w.put(static_cast<std::uint32_t>(d));
    w.put_f64s(model.input_mean);
    w.put_f64s(model.input_std);
    w.put_f64s(model.params());
    w.close();
}

MlpModel load_model(const std::filesystem::path& path) {
    io::BinaryReader r(path);
    r.expect_magic("MLP1");
    const auto layers = r.get<std::uint32_t>();
    if (layers == 0 || layers > kMaxLayers) throw FormatError(path.string() + ": implausible layer count");
    std::vector<std::size_t> dims(layers + 1);
    for (auto& d : dims) {
        d = r.get<std::uint32_t>();
        if (d == 0 || d > kMaxWidth) throw FormatError(path.string() + ": implausible layer width");
    }
    MlpModel model(dims);
    r.get_f64s(model.input_mean);
    r.get_f64s(model.input_std);
    r.get_f64s(model.params());
    r.expect_end();
    try {
        model.validate();
    } catch (const InvalidInput& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return model;
}

}  // namespace frontlearn::nn
