#include "ngrid/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "ngrid/csv.hpp"

namespace ngrid {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd sigmoid(const MatrixXd& x) {
    return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

MatrixXd relu(const MatrixXd& x) { return x.cwiseMax(0.0); }

// A_gate = X W^T + H U^T + b (bias broadcast over rows)
MatrixXd gate_preact(const MatrixXd& x, const MatrixXd& h, const MatrixXd& w,
                     const MatrixXd& u, const MatrixXd& b) {
    MatrixXd a = x * w.transpose() + h * u.transpose();
    a.rowwise() += b.col(0).transpose();
    return a;
}

struct LayerCache {
    MatrixXd x, hprev, z, r, c;
};

struct ForwardCache {
    std::vector<std::vector<LayerCache>> steps;  // [t][l]
    MatrixXd h_last;
    std::vector<MatrixXd> fc_in;    // input to each fc layer
    std::vector<MatrixXd> fc_act;   // post-rectifier activations (hidden layers)
    std::vector<MatrixXd> fc_mask;  // dropout masks (empty when inactive)
    MatrixXd y;
};

void forward_batch(const ForecastModel& model, const Eigen::MatrixXd& inputs, int batch,
                   ForwardCache& cache, double dropout, RngStream* dropout_rng) {
    const auto& arch = model.arch;
    const int layers = arch.gru_layers;
    const int seq = arch.seq_len;

    cache.steps.assign(seq, std::vector<LayerCache>(layers));
    std::vector<MatrixXd> h(layers);
    for (int l = 0; l < layers; ++l) h[l] = MatrixXd::Zero(batch, model.gru[l].hidden_size());

    for (int t = 0; t < seq; ++t) {
        MatrixXd x(batch, arch.input_features);
        for (int b = 0; b < batch; ++b) x.row(b) = inputs.row(b * seq + t);
        for (int l = 0; l < layers; ++l) {
            const GruLayerParams& p = model.gru[l];
            LayerCache& lc = cache.steps[t][l];
            lc.x = x;
            lc.hprev = h[l];
            lc.z = sigmoid(gate_preact(x, h[l], p.w_update, p.u_update, p.b_update));
            lc.r = sigmoid(gate_preact(x, h[l], p.w_reset, p.u_reset, p.b_reset));
            const MatrixXd gated = lc.r.cwiseProduct(h[l]);
            lc.c = gate_preact(x, gated, p.w_cand, p.u_cand, p.b_cand).array().tanh();
            h[l] = ((1.0 - lc.z.array()) * h[l].array() + lc.z.array() * lc.c.array()).matrix();
            x = h[l];
        }
    }
    cache.h_last = h[layers - 1];

    const int fc_hidden_count = static_cast<int>(model.fc.size()) - 1;
    cache.fc_in.assign(model.fc.size(), MatrixXd());
    cache.fc_act.assign(fc_hidden_count, MatrixXd());
    cache.fc_mask.assign(fc_hidden_count, MatrixXd());

    MatrixXd cur = cache.h_last;
    for (int i = 0; i < fc_hidden_count; ++i) {
        cache.fc_in[i] = cur;
        MatrixXd z = cur * model.fc[i].w.transpose();
        z.rowwise() += model.fc[i].b.col(0).transpose();
        cache.fc_act[i] = relu(z);
        cur = cache.fc_act[i];
        if (dropout > 0.0 && dropout_rng != nullptr) {
            MatrixXd mask(cur.rows(), cur.cols());
            const double keep = 1.0 - dropout;
            for (Eigen::Index r = 0; r < mask.rows(); ++r)
                for (Eigen::Index c = 0; c < mask.cols(); ++c)
                    mask(r, c) = dropout_rng->bernoulli(keep) ? 1.0 / keep : 0.0;
            cache.fc_mask[i] = mask;
            cur = cur.cwiseProduct(mask);
        }
    }
    cache.fc_in[fc_hidden_count] = cur;
    cache.y = cur * model.fc.back().w.transpose();
    cache.y.rowwise() += model.fc.back().b.col(0).transpose();
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("train.epochs: must be >= 1");
    if (batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
    if (learning_rate <= 0.0) throw ConfigError("train.learning_rate: must be > 0");
    if (grad_moving_avg <= 0.0 || grad_moving_avg >= 1.0)
        throw ConfigError("train.grad_moving_avg: must be in (0,1)");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("train.dropout: must be in [0,1)");
    if (grad_clip <= 0.0) throw ConfigError("train.grad_clip: must be > 0");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw ConfigError("train.train_fraction: must be in (0,1)");
}

GruLayerParams GruLayerParams::zeros(int input_size, int hidden_size) {
    GruLayerParams p;
    p.w_update = MatrixXd::Zero(hidden_size, input_size);
    p.u_update = MatrixXd::Zero(hidden_size, hidden_size);
    p.b_update = MatrixXd::Zero(hidden_size, 1);
    p.w_reset = p.w_update;
    p.u_reset = p.u_update;
    p.b_reset = p.b_update;
    p.w_cand = p.w_update;
    p.u_cand = p.u_update;
    p.b_cand = p.b_update;
    return p;
}

Eigen::VectorXd gru_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                         const GruLayerParams& p) {
    if (x.size() != p.input_size() || h.size() != p.hidden_size())
        throw ForecastError("gru_cell: input/hidden dimensions do not match the layer");
    const VectorXd z =
        sigmoid(p.w_update * x + p.u_update * h + p.b_update.col(0));
    const VectorXd r = sigmoid(p.w_reset * x + p.u_reset * h + p.b_reset.col(0));
    const VectorXd cand =
        (p.w_cand * x + p.u_cand * r.cwiseProduct(h) + p.b_cand.col(0)).array().tanh();
    return ((1.0 - z.array()) * h.array() + z.array() * cand.array()).matrix();
}

ForecastModel ForecastModel::create_zero(const ModelArch& arch) {
    ForecastModel m;
    m.arch = arch;
    int in = arch.input_features;
    for (int l = 0; l < arch.gru_layers; ++l) {
        m.gru.push_back(GruLayerParams::zeros(in, arch.hidden_size));
        in = arch.hidden_size;
    }
    std::vector<int> sizes = arch.fc_hidden;
    sizes.push_back(arch.horizon * arch.input_features);
    for (int s : sizes) {
        FcLayerParams fcp;
        fcp.w = MatrixXd::Zero(s, in);
        fcp.b = MatrixXd::Zero(s, 1);
        m.fc.push_back(std::move(fcp));
        in = s;
    }
    return m;
}

ForecastModel ForecastModel::create(const ModelArch& arch, RngStream& rng) {
    ForecastModel m = create_zero(arch);
    // biases stay zero; weights start uniform in +-1/sqrt(fan_in)
    auto init = [&rng](MatrixXd& w) {
        const double a = 1.0 / std::sqrt(static_cast<double>(w.cols()));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-a, a);
    };
    for (auto& g : m.gru) {
        init(g.w_update);
        init(g.u_update);
        init(g.w_reset);
        init(g.u_reset);
        init(g.w_cand);
        init(g.u_cand);
    }
    for (auto& f : m.fc) init(f.w);
    return m;
}

std::vector<Eigen::MatrixXd*> ForecastModel::parameters() {
    std::vector<MatrixXd*> out;
    for (auto& g : gru) {
        out.push_back(&g.w_update);
        out.push_back(&g.u_update);
        out.push_back(&g.b_update);
        out.push_back(&g.w_reset);
        out.push_back(&g.u_reset);
        out.push_back(&g.b_reset);
        out.push_back(&g.w_cand);
        out.push_back(&g.u_cand);
        out.push_back(&g.b_cand);
    }
    for (auto& f : fc) {
        out.push_back(&f.w);
        out.push_back(&f.b);
    }
    return out;
}

std::vector<const Eigen::MatrixXd*> ForecastModel::parameters() const {
    std::vector<const MatrixXd*> out;
    for (const MatrixXd* p : const_cast<ForecastModel*>(this)->parameters()) out.push_back(p);
    return out;
}

double ForecastModel::feature_range(int f) const {
    const double r = feat_max[f] - feat_min[f];
    return r > 1e-9 ? r : 1.0;
}

ForecastWindow persistence_forecast(const HistoryWindow& history) {
    ForecastWindow out(3, 2);
    for (int k = 0; k < 3; ++k) out.row(k) = history.row(history.rows() - 1);
    return out;
}

ForecastWindow forecast(const ForecastModel& model, const HistoryWindow& history) {
    if (!model.normalizer_fitted)
        throw ForecastError("model not ready: normalizer has not been fitted");
    if (history.rows() != model.arch.seq_len)
        throw ForecastError("forecast: history must have exactly " +
                            std::to_string(model.arch.seq_len) + " rows");

    MatrixXd inputs(model.arch.seq_len, 2);
    for (int t = 0; t < model.arch.seq_len; ++t)
        for (int f = 0; f < 2; ++f)
            inputs(t, f) = (history(t, f) - model.feat_min[f]) / model.feature_range(f);

    ForwardCache cache;
    forward_batch(model, inputs, 1, cache, 0.0, nullptr);

    ForecastWindow out(model.arch.horizon, 2);
    for (int k = 0; k < model.arch.horizon; ++k) {
        for (int f = 0; f < 2; ++f) {
            double v = cache.y(0, k * 2 + f) * model.feature_range(f) + model.feat_min[f];
            if (f == 1) v = std::max(0.0, v);  // PV cannot be negative
            out(k, f) = v;
        }
    }
    return out;
}

double loss_and_gradients(const ForecastModel& model, const SampleBatch& batch,
                          std::vector<Eigen::MatrixXd>& grads, double dropout,
                          RngStream* dropout_rng) {
    const auto params = model.parameters();
    grads.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i)
        grads[i] = MatrixXd::Zero(params[i]->rows(), params[i]->cols());

    ForwardCache cache;
    forward_batch(model, batch.inputs, batch.batch, cache, dropout, dropout_rng);

    const MatrixXd err = cache.y - batch.targets;
    const double denom = static_cast<double>(err.size());
    const double loss = err.squaredNorm() / denom;

    // gradient index helpers matching ForecastModel::parameters() order
    const int layers = model.arch.gru_layers;
    auto gw = [&](int l, int gate, int part) -> MatrixXd& {
        return grads[static_cast<size_t>(l) * 9 + gate * 3 + part];
    };
    const size_t fc_base = static_cast<size_t>(layers) * 9;

    MatrixXd d_out = (2.0 / denom) * err;

    // fully connected stack, output layer first
    const int fc_hidden_count = static_cast<int>(model.fc.size()) - 1;
    {
        const int i = fc_hidden_count;
        grads[fc_base + 2 * i] += d_out.transpose() * cache.fc_in[i];
        grads[fc_base + 2 * i + 1].col(0) += d_out.colwise().sum().transpose();
        d_out = d_out * model.fc[i].w;
    }
    for (int i = fc_hidden_count - 1; i >= 0; --i) {
        if (cache.fc_mask[i].size() > 0) d_out = d_out.cwiseProduct(cache.fc_mask[i]);
        d_out = d_out.cwiseProduct((cache.fc_act[i].array() > 0.0).cast<double>().matrix());
        grads[fc_base + 2 * i] += d_out.transpose() * cache.fc_in[i];
        grads[fc_base + 2 * i + 1].col(0) += d_out.colwise().sum().transpose();
        d_out = d_out * model.fc[i].w;
    }

    // backpropagation through time over the stacked GRU layers
    std::vector<MatrixXd> carry(layers);
    for (int l = 0; l < layers; ++l)
        carry[l] = MatrixXd::Zero(batch.batch, model.gru[l].hidden_size());

    for (int t = model.arch.seq_len - 1; t >= 0; --t) {
        MatrixXd from_above =
            (t == model.arch.seq_len - 1)
                ? d_out
                : MatrixXd::Zero(batch.batch, model.gru[layers - 1].hidden_size());
        for (int l = layers - 1; l >= 0; --l) {
            const GruLayerParams& p = model.gru[l];
            const LayerCache& lc = cache.steps[t][l];
            const MatrixXd dh = carry[l] + from_above;

            const MatrixXd dz = dh.cwiseProduct(lc.c - lc.hprev);
            const MatrixXd dc = dh.cwiseProduct(lc.z);
            MatrixXd dhprev = dh.cwiseProduct(MatrixXd::Ones(dh.rows(), dh.cols()) - lc.z);

            const MatrixXd da_c =
                dc.cwiseProduct((1.0 - lc.c.array().square()).matrix());
            gw(l, 2, 0) += da_c.transpose() * lc.x;
            gw(l, 2, 1) += da_c.transpose() * lc.r.cwiseProduct(lc.hprev);
            gw(l, 2, 2).col(0) += da_c.colwise().sum().transpose();

            const MatrixXd g = da_c * p.u_cand;
            const MatrixXd dr = g.cwiseProduct(lc.hprev);
            dhprev += g.cwiseProduct(lc.r);

            const MatrixXd da_r =
                dr.cwiseProduct(lc.r.cwiseProduct((1.0 - lc.r.array()).matrix()));
            gw(l, 1, 0) += da_r.transpose() * lc.x;
            gw(l, 1, 1) += da_r.transpose() * lc.hprev;
            gw(l, 1, 2).col(0) += da_r.colwise().sum().transpose();

            const MatrixXd da_z =
                dz.cwiseProduct(lc.z.cwiseProduct((1.0 - lc.z.array()).matrix()));
            gw(l, 0, 0) += da_z.transpose() * lc.x;
            gw(l, 0, 1) += da_z.transpose() * lc.hprev;
            gw(l, 0, 2).col(0) += da_z.colwise().sum().transpose();

            dhprev += da_z * p.u_update + da_r * p.u_reset;
            carry[l] = dhprev;
            from_above = da_z * p.w_update + da_r * p.w_reset + da_c * p.w_cand;
        }
    }
    return loss;
}

double clip_global_norm(std::vector<Eigen::MatrixXd>& grads, double threshold) {
    double sq = 0.0;
    for (const auto& g : grads) sq += g.squaredNorm();
    const double norm = std::sqrt(sq);
    if (norm > threshold && norm > 0.0) {
        const double scale = threshold / norm;
        for (auto& g : grads) g *= scale;
        return threshold;
    }
    return norm;
}

Series series_from_csv(const std::string& path) {
    Series out;
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 3)
            throw ConfigError("dataset: expected 'slot_abs,load_kw,pv_kw' rows");
        out.push_back({csv::to_double(row[1], "dataset.load_kw"),
                       csv::to_double(row[2], "dataset.pv_kw")});
    }
    return out;
}

TrainResult train(const Series& series, const TrainConfig& cfg, const ModelArch& arch,
                  RngStream& rng) {
    cfg.validate();
    const int window = arch.seq_len + arch.horizon;
    const int n = static_cast<int>(series.size());
    if (n < window)
        throw ForecastError("dataset too short: need at least " + std::to_string(window) +
                            " slots, got " + std::to_string(n));

    int split = static_cast<int>(cfg.train_fraction * n);
    if (split < window) split = n;  // degenerate sizes: train on everything

    ForecastModel model = ForecastModel::create(arch, rng);
    model.feat_min = {series[0][0], series[0][1]};
    model.feat_max = model.feat_min;
    for (int i = 1; i < split; ++i) {
        for (int f = 0; f < 2; ++f) {
            model.feat_min[f] = std::min(model.feat_min[f], series[i][f]);
            model.feat_max[f] = std::max(model.feat_max[f], series[i][f]);
        }
    }
    model.normalizer_fitted = true;

    auto normalized = [&](int idx, int f) {
        return (series[idx][f] - model.feat_min[f]) / model.feature_range(f);
    };

    std::vector<int> train_starts;
    for (int i = 0; i + window <= split; ++i) train_starts.push_back(i);
    std::vector<int> val_starts;
    for (int i = split; i + window <= n; ++i) val_starts.push_back(i);

    auto make_batch = [&](const std::vector<int>& starts, size_t from, size_t count) {
        SampleBatch batch;
        batch.batch = static_cast<int>(count);
        batch.inputs = MatrixXd(count * arch.seq_len, 2);
        batch.targets = MatrixXd(count, arch.horizon * 2);
        for (size_t b = 0; b < count; ++b) {
            const int s = starts[from + b];
            for (int t = 0; t < arch.seq_len; ++t)
                for (int f = 0; f < 2; ++f)
                    batch.inputs(b * arch.seq_len + t, f) = normalized(s + t, f);
            for (int k = 0; k < arch.horizon; ++k)
                for (int f = 0; f < 2; ++f)
                    batch.targets(b, k * 2 + f) = normalized(s + arch.seq_len + k, f);
        }
        return batch;
    };

    // ADAM state
    auto params = model.parameters();
    std::vector<MatrixXd> m1(params.size()), m2(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        m1[i] = MatrixXd::Zero(params[i]->rows(), params[i]->cols());
        m2[i] = m1[i];
    }
    std::vector<MatrixXd> grads;
    long step = 0;
    const double eps = 1e-8;

    RngStream shuffle_rng(rng.next_u64());
    RngStream dropout_rng(rng.next_u64());

    std::vector<int> order = train_starts;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);
        for (size_t at = 0; at < order.size(); at += cfg.batch_size) {
            const size_t count = std::min<size_t>(cfg.batch_size, order.size() - at);
            const SampleBatch batch = make_batch(order, at, count);
            const double loss = loss_and_gradients(model, batch, grads, cfg.dropout,
                                                   cfg.dropout > 0.0 ? &dropout_rng : nullptr);
            if (!std::isfinite(loss))
                throw ForecastError(
                    "training diverged (non-finite loss); try a lower learning rate");
            clip_global_norm(grads, cfg.grad_clip);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.grad_moving_avg, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (size_t i = 0; i < params.size(); ++i) {
                m1[i] = cfg.grad_moving_avg * m1[i] + (1.0 - cfg.grad_moving_avg) * grads[i];
                m2[i] = cfg.beta2 * m2[i] +
                        (1.0 - cfg.beta2) * grads[i].cwiseProduct(grads[i]);
                const MatrixXd mhat = m1[i] / bc1;
                const MatrixXd vhat = m2[i] / bc2;
                *params[i] -=
                    cfg.learning_rate *
                    (mhat.array() / (vhat.array().sqrt() + eps)).matrix();
            }
        }
    }

    TrainResult result{std::move(model), {0.0, 0.0}, {0.0, 0.0}, static_cast<int>(val_starts.size())};
    if (!val_starts.empty()) {
        std::array<double, 2> sq_sum{0.0, 0.0};
        long count = 0;
        for (size_t at = 0; at < val_starts.size(); at += 512) {
            const size_t chunk = std::min<size_t>(512, val_starts.size() - at);
            const SampleBatch batch = make_batch(val_starts, at, chunk);
            ForwardCache cache;
            forward_batch(result.model, batch.inputs, batch.batch, cache, 0.0, nullptr);
            for (size_t b = 0; b < chunk; ++b) {
                for (int k = 0; k < arch.horizon; ++k) {
                    for (int f = 0; f < 2; ++f) {
                        double pred = cache.y(b, k * 2 + f) * result.model.feature_range(f) +
                                      result.model.feat_min[f];
                        if (f == 1) pred = std::max(0.0, pred);
                        const double actual = series[val_starts[at + b] + arch.seq_len + k][f];
                        sq_sum[f] += (pred - actual) * (pred - actual);
                    }
                }
                ++count;
            }
        }
        for (int f = 0; f < 2; ++f) {
            result.val_rmse_abs[f] = std::sqrt(sq_sum[f] / (count * arch.horizon));
            result.val_rmse_frac[f] = result.val_rmse_abs[f] / result.model.feature_range(f);
        }
    }
    return result;
}

namespace {

using nlohmann::json;

json matrix_to_json(const MatrixXd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data[r * m.cols() + c] = m(r, c);
    j["data"] = data;
    return j;
}

MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ForecastError("model file: matrix payload has the wrong size");
    MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
    return m;
}

}  // namespace

void ForecastModel::save(const std::string& path) const {
    json j;
    j["format"] = "ngrid-forecast-1";
    j["arch"] = {{"input_features", arch.input_features}, {"seq_len", arch.seq_len},
                 {"horizon", arch.horizon},               {"gru_layers", arch.gru_layers},
                 {"hidden_size", arch.hidden_size},       {"fc_hidden", arch.fc_hidden}};
    j["feat_min"] = {feat_min[0], feat_min[1]};
    j["feat_max"] = {feat_max[0], feat_max[1]};
    j["normalizer_fitted"] = normalizer_fitted;
    json tensors = json::array();
    for (const MatrixXd* p : parameters()) tensors.push_back(matrix_to_json(*p));
    j["tensors"] = std::move(tensors);

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ForecastError("cannot write model file: " + path);
    out << j.dump();
    out.close();
    if (out.fail()) throw ForecastError("failed to write model file: " + path);
}

ForecastModel ForecastModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ForecastError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ForecastError("model file is not valid JSON: " + std::string(e.what()));
    }
    if (j.value("format", "") != "ngrid-forecast-1")
        throw ForecastError("model file: unknown format tag");

    ModelArch arch;
    const json& a = j.at("arch");
    arch.input_features = a.at("input_features").get<int>();
    arch.seq_len = a.at("seq_len").get<int>();
    arch.horizon = a.at("horizon").get<int>();
    arch.gru_layers = a.at("gru_layers").get<int>();
    arch.hidden_size = a.at("hidden_size").get<int>();
    arch.fc_hidden = a.at("fc_hidden").get<std::vector<int>>();

    ForecastModel m = create_zero(arch);
    m.feat_min = {j.at("feat_min")[0].get<double>(), j.at("feat_min")[1].get<double>()};
    m.feat_max = {j.at("feat_max")[0].get<double>(), j.at("feat_max")[1].get<double>()};
    m.normalizer_fitted = j.at("normalizer_fitted").get<bool>();

    auto params = m.parameters();
    const json& tensors = j.at("tensors");
    if (tensors.size() != params.size())
        throw ForecastError("model file: tensor count does not match the architecture");
    for (size_t i = 0; i < params.size(); ++i) {
        MatrixXd loaded = matrix_from_json(tensors[i]);
        if (loaded.rows() != params[i]->rows() || loaded.cols() != params[i]->cols())
            throw ForecastError("model file: tensor shape mismatch");
        *params[i] = std::move(loaded);
    }
    return m;
}

}  // namespace ngrid
