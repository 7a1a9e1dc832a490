#include <cmath>

#include "doctest.h"
#include "ngrid/forecaster.hpp"

using namespace ngrid;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("gru_cell analytic cases") {
    GruLayerParams p = GruLayerParams::zeros(2, 3);
    VectorXd x = VectorXd::Zero(2);

    // zero weights, zero state: candidate tanh(0)=0, so h' = 0
    VectorXd h = VectorXd::Zero(3);
    CHECK(gru_cell(x, h, p).norm() == 0.0);

    // zero weights, state v: z = sigmoid(0) = 0.5 and candidate 0 -> h' = v/2
    h << 1.0, -2.0, 0.25;
    const VectorXd out = gru_cell(x, h, p);
    for (int i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(0.5 * h[i]).epsilon(1e-12));

    // scalar case with a saturated update gate: h' -> tanh(b_cand)
    GruLayerParams q = GruLayerParams::zeros(1, 1);
    q.b_update(0, 0) = 50.0;  // z ~ 1
    q.b_cand(0, 0) = 0.7;
    VectorXd x1 = VectorXd::Zero(1);
    VectorXd h1(1);
    h1 << -0.9;
    CHECK(gru_cell(x1, h1, q)[0] == doctest::Approx(std::tanh(0.7)).epsilon(1e-9));
}

TEST_CASE("gru_cell output is a per-coordinate convex combination") {
    RngStream rng(17);
    GruLayerParams p = GruLayerParams::zeros(4, 5);
    auto fill = [&rng](MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-2.0, 2.0);
    };
    for (int trial = 0; trial < 200; ++trial) {
        fill(p.w_update); fill(p.u_update); fill(p.b_update);
        fill(p.w_reset); fill(p.u_reset); fill(p.b_reset);
        fill(p.w_cand); fill(p.u_cand); fill(p.b_cand);
        VectorXd x(4), h(5);
        for (int i = 0; i < 4; ++i) x[i] = rng.uniform(-3.0, 3.0);
        for (int i = 0; i < 5; ++i) h[i] = rng.uniform(-3.0, 3.0);

        const VectorXd r_pre = p.w_reset * x + p.u_reset * h + p.b_reset.col(0);
        const VectorXd r_gate = (1.0 / (1.0 + (-r_pre.array()).exp())).matrix();
        const VectorXd cand = (p.w_cand * x + p.u_cand * r_gate.cwiseProduct(h) +
                               p.b_cand.col(0))
                                  .array()
                                  .tanh();
        const VectorXd out = gru_cell(x, h, p);
        for (int i = 0; i < 5; ++i) {
            CHECK(out[i] >= std::min(h[i], cand[i]) - 1e-12);
            CHECK(out[i] <= std::max(h[i], cand[i]) + 1e-12);
            CHECK(std::abs(out[i]) <= std::max(std::abs(h[i]), 1.0) + 1e-12);
        }
    }
}

TEST_CASE("gru_cell rejects mismatched shapes") {
    GruLayerParams p = GruLayerParams::zeros(2, 3);
    CHECK_THROWS_AS(gru_cell(VectorXd::Zero(5), VectorXd::Zero(3), p), ForecastError);
    CHECK_THROWS_AS(gru_cell(VectorXd::Zero(2), VectorXd::Zero(1), p), ForecastError);
}

TEST_CASE("persistence_forecast repeats the last observation") {
    HistoryWindow hist(6, 2);
    for (int t = 0; t < 6; ++t) {
        hist(t, 0) = t;
        hist(t, 1) = 2 * t;
    }
    hist(5, 0) = 4.0;
    hist(5, 1) = 2.0;
    const ForecastWindow f = persistence_forecast(hist);
    REQUIRE(f.rows() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(f(k, 0) == doctest::Approx(4.0));
        CHECK(f(k, 1) == doctest::Approx(2.0));
    }
    CHECK(persistence_forecast(HistoryWindow::Zero(6, 2)).norm() == 0.0);
}

TEST_CASE("forecast requires a fitted normalizer and keeps its shape") {
    ModelArch arch;
    arch.gru_layers = 2;
    arch.hidden_size = 4;
    arch.fc_hidden = {5};
    RngStream rng(3);
    ForecastModel model = ForecastModel::create(arch, rng);
    HistoryWindow hist = HistoryWindow::Zero(6, 2);
    CHECK_THROWS_AS(forecast(model, hist), ForecastError);

    model.feat_min = {0.0, 0.0};
    model.feat_max = {10.0, 5.0};
    model.normalizer_fitted = true;
    const ForecastWindow f = forecast(model, hist);
    CHECK(f.rows() == 3);
    CHECK(f.cols() == 2);
    for (int k = 0; k < 3; ++k) CHECK(f(k, 1) >= 0.0);  // PV clamp

    // zero-weight model collapses to the de-normalized output bias
    ForecastModel zero = ForecastModel::create_zero(arch);
    zero.feat_min = {1.0, 2.0};
    zero.feat_max = {3.0, 6.0};
    zero.normalizer_fitted = true;
    zero.fc.back().b(0, 0) = 0.5;  // first horizon step, load feature
    const ForecastWindow fz = forecast(zero, hist);
    CHECK(fz(0, 0) == doctest::Approx(1.0 + 0.5 * 2.0));  // min + y*range
    CHECK(fz(1, 0) == doctest::Approx(1.0));
    CHECK(fz(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("parameter gradients match central finite differences") {
    ModelArch arch;
    arch.gru_layers = 2;
    arch.hidden_size = 2;  // 2-unit toy model
    arch.fc_hidden = {3};
    RngStream rng(11);
    ForecastModel model = ForecastModel::create(arch, rng);
    model.feat_min = {0.0, 0.0};
    model.feat_max = {1.0, 1.0};
    model.normalizer_fitted = true;

    SampleBatch batch;
    batch.batch = 3;
    batch.inputs = MatrixXd(18, 2);
    batch.targets = MatrixXd(3, 6);
    RngStream data_rng(13);
    for (Eigen::Index r = 0; r < batch.inputs.rows(); ++r)
        for (int c = 0; c < 2; ++c) batch.inputs(r, c) = data_rng.uniform(0.0, 1.0);
    for (Eigen::Index r = 0; r < batch.targets.rows(); ++r)
        for (int c = 0; c < 6; ++c) batch.targets(r, c) = data_rng.uniform(0.0, 1.0);

    std::vector<MatrixXd> grads;
    loss_and_gradients(model, batch, grads, 0.0, nullptr);

    auto params = model.parameters();
    // step balances truncation against cancellation noise on ~1e-7 gradients
    const double eps = 3e-5;
    double worst = 0.0;
    for (size_t pi = 0; pi < params.size(); ++pi) {
        MatrixXd& tensor = *params[pi];
        for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
            for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
                const double saved = tensor(r, c);
                std::vector<MatrixXd> scratch;
                tensor(r, c) = saved + eps;
                const double up = loss_and_gradients(model, batch, scratch, 0.0, nullptr);
                tensor(r, c) = saved - eps;
                const double dn = loss_and_gradients(model, batch, scratch, 0.0, nullptr);
                tensor(r, c) = saved;
                const double fd = (up - dn) / (2.0 * eps);
                const double an = grads[pi](r, c);
                const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
                worst = std::max(worst, rel);
            }
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("clip_global_norm bounds the gradient norm at the threshold") {
    std::vector<MatrixXd> grads;
    grads.push_back(MatrixXd::Constant(3, 3, 2.0));
    grads.push_back(MatrixXd::Constant(2, 1, -5.0));
    double sq = 0.0;
    for (const auto& g : grads) sq += g.squaredNorm();
    REQUIRE(std::sqrt(sq) > 1.0);

    const double post = clip_global_norm(grads, 1.0);
    CHECK(post == doctest::Approx(1.0));
    sq = 0.0;
    for (const auto& g : grads) sq += g.squaredNorm();
    CHECK(std::sqrt(sq) == doctest::Approx(1.0).epsilon(1e-12));

    // a small gradient passes through untouched
    std::vector<MatrixXd> small;
    small.push_back(MatrixXd::Constant(2, 2, 0.01));
    const MatrixXd before = small[0];
    clip_global_norm(small, 1.0);
    CHECK(small[0] == before);
}

TEST_CASE("training a constant series reaches near-zero validation error") {
    Series series(400, {4.0, 2.0});
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.batch_size = 64;
    cfg.dropout = 0.0;
    ModelArch arch;
    arch.gru_layers = 2;
    arch.hidden_size = 6;
    arch.fc_hidden = {8};
    RngStream rng(21);
    const TrainResult res = train(series, cfg, arch, rng);
    REQUIRE(res.val_windows > 0);
    // constant features have zero range; fractions fall back to absolute kW
    CHECK(res.val_rmse_frac[0] < 0.01);
    CHECK(res.val_rmse_frac[1] < 0.01);

    HistoryWindow hist = HistoryWindow::Constant(6, 2, 0.0);
    hist.col(0).setConstant(4.0);
    hist.col(1).setConstant(2.0);
    const ForecastWindow f = forecast(res.model, hist);
    for (int k = 0; k < 3; ++k) {
        CHECK(f(k, 0) == doctest::Approx(4.0).epsilon(0.05));
        CHECK(f(k, 1) == doctest::Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    Series series;
    RngStream noise(31);
    for (int i = 0; i < 300; ++i)
        series.push_back({2.0 + std::sin(i * 0.3) + 0.1 * noise.uniform01(),
                          std::max(0.0, std::cos(i * 0.21))});
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 32;
    ModelArch arch;
    arch.gru_layers = 2;
    arch.hidden_size = 4;
    arch.fc_hidden = {6};

    RngStream rng_a(77), rng_b(77), rng_c(78);
    const TrainResult a = train(series, cfg, arch, rng_a);
    const TrainResult b = train(series, cfg, arch, rng_b);
    const TrainResult c = train(series, cfg, arch, rng_c);
    CHECK(a.val_rmse_frac[0] == b.val_rmse_frac[0]);  // bitwise identical
    CHECK(a.val_rmse_frac[1] == b.val_rmse_frac[1]);
    CHECK(a.val_rmse_frac[0] != c.val_rmse_frac[0]);
}

TEST_CASE("training rejects too-short datasets") {
    Series tiny(8, {1.0, 1.0});
    TrainConfig cfg;
    ModelArch arch;
    arch.gru_layers = 1;
    arch.hidden_size = 2;
    arch.fc_hidden = {2};
    RngStream rng(1);
    CHECK_THROWS_AS(train(tiny, cfg, arch, rng), ForecastError);
}

TEST_CASE("model files round-trip through save and load") {
    ModelArch arch;
    arch.gru_layers = 2;
    arch.hidden_size = 3;
    arch.fc_hidden = {4};
    RngStream rng(41);
    ForecastModel model = ForecastModel::create(arch, rng);
    model.feat_min = {0.5, 0.0};
    model.feat_max = {9.5, 4.0};
    model.normalizer_fitted = true;

    const std::string path = "test_model.json";
    model.save(path);
    const ForecastModel loaded = ForecastModel::load(path);
    remove(path.c_str());

    HistoryWindow hist(6, 2);
    RngStream h(43);
    for (int t = 0; t < 6; ++t) {
        hist(t, 0) = h.uniform(0.5, 9.5);
        hist(t, 1) = h.uniform(0.0, 4.0);
    }
    const ForecastWindow a = forecast(model, hist);
    const ForecastWindow b = forecast(loaded, hist);
    CHECK((a - b).norm() == doctest::Approx(0.0).epsilon(1e-15));
}
