#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "frontlearn/errors.hpp"
#include "frontlearn/nn/mlp.hpp"
#include "frontlearn/nn/train.hpp"
#include "frontlearn/numerics/rng.hpp"

using namespace frontlearn;
using namespace frontlearn::nn;

namespace {

Matrix random_features(std::size_t n, std::uint64_t seed, std::size_t cols = 3) {
    numerics::Rng rng(seed);
    Matrix m(n, cols);
    for (double& v : m.flat()) v = rng.uniform(-2.0, 2.0);
    return m;
}

MlpModel random_model(std::vector<std::size_t> dims, std::uint64_t seed) {
    MlpModel m(std::move(dims));
    numerics::Rng rng(seed);
    m.init_glorot(rng);
    for (std::size_t l = 0; l < m.n_layers(); ++l)
        for (double& b : m.biases(l)) b = rng.uniform(-0.3, 0.3);
    for (std::size_t f = 0; f < m.n_inputs(); ++f) {
        m.input_mean[f] = rng.uniform(-0.5, 0.5);
        m.input_std[f] = rng.uniform(0.5, 2.0);
    }
    return m;
}

std::filesystem::path temp_file(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("swish values") {
    CHECK(swish(0.0) == 0.0);
    CHECK(swish(1.0) == doctest::Approx(0.7310586).epsilon(1e-7));
    const double s = swish(-20.0);
    CHECK(s < 0.0);
    CHECK(s > -1e-7);
}

TEST_CASE("forward pass examples") {
    auto zero = MlpModel::default_architecture();
    const auto x = random_features(17, 1);
    const auto y0 = mlp_forward(zero, x);
    for (double v : y0.flat()) CHECK(v == 0.0);

    MlpModel one({3, 1, 1});
    one.weights(0)[0] = 1.0;  // w = [1, 0, 0]
    one.weights(1)[0] = 1.0;
    Matrix in(1, 3);
    in(0, 0) = 1.0;
    CHECK(mlp_forward(one, in)(0, 0) == doctest::Approx(0.7310586).epsilon(1e-7));

    Matrix bad(1, 3);
    bad(0, 1) = NAN;
    CHECK_THROWS_AS(mlp_forward(one, bad), InvalidInput);
}

TEST_CASE("batched forward equals row-by-row evaluation") {
    const auto model = random_model({3, 96, 96, 96, 96, 1}, 4);
    const auto x = random_features(37, 5);
    const auto batch = mlp_forward(model, x);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        Matrix one(1, 3);
        for (std::size_t c = 0; c < 3; ++c) one(0, c) = x(r, c);
        CHECK(mlp_forward(model, one)(0, 0) == doctest::Approx(batch(r, 0)).epsilon(1e-12));
    }
}

TEST_CASE("concurrent forward passes agree") {
    const auto model = random_model({3, 32, 32, 1}, 8);
    const auto x = random_features(200, 9);
    const auto ref = mlp_forward(model, x);
    std::vector<Matrix> out(4);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < out.size(); ++t) threads.emplace_back([&, t] { out[t] = mlp_forward(model, x); });
    for (auto& t : threads) t.join();
    for (const auto& o : out) CHECK(o == ref);
}

TEST_CASE("gradient matches central finite differences") {
    auto model = random_model({3, 8, 8, 1}, 21);
    const auto x = random_features(25, 22);
    std::vector<double> y(25);
    numerics::Rng rng(23);
    for (double& v : y) v = rng.uniform(-1, 1);
    std::vector<double> grad(model.n_params());
    mlp_gradient(model, x, y, grad);

    auto loss = [&](MlpModel& m) {
        std::vector<double> g(m.n_params());
        return mlp_gradient(m, x, y, g);
    };
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < model.n_params(); ++i) {
        const double keep = model.params()[i];
        model.params()[i] = keep + h;
        const double lp = loss(model);
        model.params()[i] = keep - h;
        const double lm = loss(model);
        model.params()[i] = keep;
        const double fd = (lp - lm) / (2 * h);
        worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1e-6, std::abs(fd) + std::abs(grad[i])));
    }
    CHECK(model.n_params() >= 100);
    CHECK(worst <= 1e-5);
}

TEST_CASE("gradient structure") {
    auto model = random_model({3, 6, 1}, 30);
    const auto x = random_features(10, 31);
    const auto out = mlp_forward(model, x);
    std::vector<double> grad(model.n_params());
    CHECK(mlp_gradient(model, x, out.flat(), grad) == 0.0);
    for (double g : grad) CHECK(g == 0.0);

    // Scaling every residual by 2 scales the gradient by 2.
    std::vector<double> t1(10), t2(10), g1(model.n_params()), g2(model.n_params());
    for (std::size_t r = 0; r < 10; ++r) {
        t1[r] = out(r, 0) - 0.3 * static_cast<double>(r % 3);
        t2[r] = out(r, 0) - 2 * 0.3 * static_cast<double>(r % 3);
    }
    mlp_gradient(model, x, t1, g1);
    mlp_gradient(model, x, t2, g2);
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g2[i] == doctest::Approx(2 * g1[i]).epsilon(1e-10).scale(1e-12));
}

TEST_CASE("Adam step") {
    std::vector<double> p{1.0, -2.0};
    AdamState s(2);
    const std::vector<double> zero{0.0, 0.0};
    adam_step(p, zero, s, {});
    CHECK(p[0] == 1.0);
    CHECK(p[1] == -2.0);

    std::vector<double> q{0.0};
    AdamState t(1);
    const std::vector<double> g{5.0};
    adam_step(q, g, t, AdamConfig{1e-3});
    CHECK(std::abs(q[0] + 0.001) <= 1e-6);

    AdamState wrong(3);
    CHECK_THROWS_AS(adam_step(p, zero, wrong, {}), InvalidInput);
}

TEST_CASE("training learns a teacher network") {
    const auto teacher = random_model({3, 16, 16, 1}, 40);
    const auto x = random_features(3000, 41);
    const auto y = mlp_forward(teacher, x);
    TrainConfig cfg;
    cfg.layer_dims = {3, 32, 32, 1};
    cfg.epochs = 30;
    cfg.batch_size = 128;
    cfg.shuffle_seed = 42;
    const auto r = train(x, y.flat(), cfg);
    REQUIRE(r.history.validation_mse.size() == 31);
    CHECK(r.history.validation_mse.back() * 10 <= r.history.validation_mse.front());
}

TEST_CASE("training on zero targets") {
    const auto x = random_features(2048, 50);
    const std::vector<double> y(2048, 0.0);
    TrainConfig cfg;
    cfg.layer_dims = {3, 16, 16, 1};
    // Driving every output to exactly zero is slow for Adam; give it room.
    cfg.epochs = 400;
    cfg.batch_size = 256;
    cfg.learning_rate = 1e-2;
    const auto r = train(x, y, cfg);
    CHECK(r.history.train_mse.back() <= 1e-6);
}

TEST_CASE("training is deterministic and stable under row order") {
    const auto teacher = random_model({3, 8, 1}, 60);
    const auto x = random_features(1500, 61);
    const auto y = mlp_forward(teacher, x);
    TrainConfig cfg;
    cfg.layer_dims = {3, 16, 16, 1};
    cfg.epochs = 15;
    cfg.batch_size = 100;
    const auto a = train(x, y.flat(), cfg);
    const auto b = train(x, y.flat(), cfg);
    CHECK(a.model == b.model);
    CHECK(a.history.train_mse == b.history.train_mse);

    Matrix xr(x.rows(), 3);
    std::vector<double> yr(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const std::size_t s = x.rows() - 1 - r;
        for (std::size_t c = 0; c < 3; ++c) xr(r, c) = x(s, c);
        yr[r] = y(s, 0);
    }
    const auto c = train(xr, yr, cfg);
    CHECK(c.history.validation_mse.back() == doctest::Approx(a.history.validation_mse.back()).epsilon(0.1));
}

TEST_CASE("normalization statistics make training invariant to affine feature scaling") {
    const auto teacher = random_model({3, 8, 1}, 70);
    const auto x = random_features(600, 71);
    const auto y = mlp_forward(teacher, x);
    Matrix xs = x;
    const double scale[3] = {100.0, 0.01, 3.0}, shift[3] = {15.0, -2.0, 0.5};
    for (std::size_t r = 0; r < xs.rows(); ++r)
        for (std::size_t c = 0; c < 3; ++c) xs(r, c) = scale[c] * x(r, c) + shift[c];
    TrainConfig cfg;
    cfg.layer_dims = {3, 8, 1};
    cfg.epochs = 5;
    cfg.batch_size = 64;
    const auto a = train(x, y.flat(), cfg);
    const auto b = train(xs, y.flat(), cfg);
    for (std::size_t e = 0; e < a.history.train_mse.size(); ++e)
        CHECK(b.history.train_mse[e] == doctest::Approx(a.history.train_mse[e]).epsilon(1e-9));
}

TEST_CASE("small datasets fall back to full-batch steps") {
    const auto x = random_features(40, 80);
    const std::vector<double> y(40, 0.25);
    TrainConfig cfg;
    cfg.layer_dims = {3, 4, 1};
    cfg.epochs = 3;
    const auto r = train(x, y, cfg);
    CHECK(r.history.train_mse.size() == 4);
}

TEST_CASE("training rejects bad configurations and reports divergence") {
    const auto x = random_features(100, 90);
    const std::vector<double> y(100, 0.0);
    TrainConfig cfg;
    cfg.layer_dims = {3, 4, 1};
    cfg.validation_fraction = 0.5;
    CHECK_THROWS_AS(train(x, y, cfg), InvalidInput);
    cfg.validation_fraction = 0.1;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(x, y, cfg), InvalidInput);

    std::vector<double> huge(100, 1e300);
    cfg.learning_rate = 1e-3;
    CHECK_THROWS_AS(train(x, huge, cfg), TrainingDiverged);
}

TEST_CASE("model files round trip bitwise and reject corruption") {
    const auto model = random_model({3, 96, 96, 96, 96, 1}, 100);
    const auto path = temp_file("frontlearn_model_test.mlp");
    save_model(model, path);
    CHECK(load_model(path) == model);

    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
    CHECK_THROWS_AS(load_model(path), FormatError);

    save_model(model, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.write("MLPX", 4);
    }
    CHECK_THROWS_AS(load_model(path), FormatError);
    std::filesystem::remove(path);
}
