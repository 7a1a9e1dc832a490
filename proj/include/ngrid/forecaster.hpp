#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "ngrid/core.hpp"
#include "ngrid/rng.hpp"

namespace ngrid {

class ForecastError : public std::runtime_error {
public:
    explicit ForecastError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One gated recurrent layer. Biases are stored as single-column matrices so
/// every parameter tensor can be enumerated uniformly.
struct GruLayerParams {
    Eigen::MatrixXd w_update, u_update, b_update;  // z gate
    Eigen::MatrixXd w_reset, u_reset, b_reset;     // r gate
    Eigen::MatrixXd w_cand, u_cand, b_cand;        // candidate state

    static GruLayerParams zeros(int input_size, int hidden_size);
    int hidden_size() const { return static_cast<int>(b_update.rows()); }
    int input_size() const { return static_cast<int>(w_update.cols()); }
};

struct FcLayerParams {
    Eigen::MatrixXd w;  // out x in
    Eigen::MatrixXd b;  // out x 1
};

struct ModelArch {
    int input_features = 2;
    int seq_len = 6;
    int horizon = 3;
    int gru_layers = 6;
    int hidden_size = 32;
    std::vector<int> fc_hidden = {64, 32};
};

struct TrainConfig {
    int epochs = 1000;
    int batch_size = 200;
    double learning_rate = 0.005;
    double grad_moving_avg = 0.9;  // ADAM first-moment decay
    double beta2 = 0.999;
    double dropout = 0.2;
    double grad_clip = 1.0;
    double train_fraction = 0.8;

    void validate() const;
};

/// Single GRU cell step: z and r gates plus candidate state, combined as
/// h' = (1-z) h + z h~.
Eigen::VectorXd gru_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                         const GruLayerParams& p);

using HistoryWindow = Eigen::Matrix<double, Eigen::Dynamic, 2>;  // seq_len x 2
using ForecastWindow = Eigen::Matrix<double, Eigen::Dynamic, 2>;  // horizon x 2

class ForecastModel {
public:
    ModelArch arch;
    std::vector<GruLayerParams> gru;
    std::vector<FcLayerParams> fc;  // rectifier hidden layers, linear output
    Eigen::Vector2d feat_min = Eigen::Vector2d::Zero();
    Eigen::Vector2d feat_max = Eigen::Vector2d::Ones();
    bool normalizer_fitted = false;

    static ForecastModel create(const ModelArch& arch, RngStream& rng);
    static ForecastModel create_zero(const ModelArch& arch);

    /// All parameter tensors in a fixed enumeration order.
    std::vector<Eigen::MatrixXd*> parameters();
    std::vector<const Eigen::MatrixXd*> parameters() const;

    double feature_range(int f) const;

    void save(const std::string& path) const;
    static ForecastModel load(const std::string& path);
};

/// Inference: history of the 6 most recent (load kW, pv kW) rows, oldest
/// first, mapped to 3 future rows. PV outputs are clamped at zero.
ForecastWindow forecast(const ForecastModel& model, const HistoryWindow& history);

/// Baseline that repeats the most recent pair over the horizon.
ForecastWindow persistence_forecast(const HistoryWindow& history);

struct TrainResult {
    ForecastModel model;
    // validation RMSE divided by the train-split range of each feature
    std::array<double, 2> val_rmse_frac{0.0, 0.0};
    std::array<double, 2> val_rmse_abs{0.0, 0.0};
    int val_windows = 0;
};

/// Series row: (load kW, pv kW) per slot, chronological.
using Series = std::vector<std::array<double, 2>>;

Series series_from_csv(const std::string& path);

TrainResult train(const Series& series, const TrainConfig& cfg, const ModelArch& arch,
                  RngStream& rng);

// -- exposed pieces of the training loop, used by gradient and clipping tests

struct SampleBatch {
    Eigen::MatrixXd inputs;   // (B*seq_len) x 2, normalized, sample-major
    Eigen::MatrixXd targets;  // B x (horizon*2), normalized
    int batch = 0;
};

/// Mean-squared-error loss over the batch plus parameter gradients (aligned
/// with ForecastModel::parameters()). Dropout masks come from `dropout_rng`
/// when it is non-null and dropout > 0.
double loss_and_gradients(const ForecastModel& model, const SampleBatch& batch,
                          std::vector<Eigen::MatrixXd>& grads, double dropout,
                          RngStream* dropout_rng);

/// Scales gradients so the global L2 norm does not exceed `threshold`.
/// Returns the post-clip norm.
double clip_global_norm(std::vector<Eigen::MatrixXd>& grads, double threshold);

}  // namespace ngrid
