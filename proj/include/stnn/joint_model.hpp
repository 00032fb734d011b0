#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stnn/geobin.hpp"
#include "stnn/mlp.hpp"

namespace stnn {

enum class ModelKind : std::uint8_t { Stnn = 0, Lrt = 1, Lrd = 2, TimeNn = 3, DistNn = 4 };

// File tags: "STNN", "LRT", "LRD", "TIMENN", "DISTNN".
std::string_view model_tag(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
bool predicts_time(ModelKind kind);
bool predicts_distance(ModelKind kind);

inline constexpr Eigen::Index kDistanceTarget = 0;
inline constexpr Eigen::Index kTimeTarget = 1;

// Everything a trained model needs to turn a raw query into network inputs
// and network outputs back into miles and seconds.
struct ModelContext {
    geo::GridSpec grid;
    geo::TimeSpec timespec;
    geo::Standardizer features;  // kFeatureCount dims
    geo::Standardizer targets;   // {distance, time}

    Eigen::MatrixXd standardized_features(const geo::FeatureTable& table) const;
    // 2 x N, rows {distance, time}, in standardized units.
    Eigen::MatrixXd standardized_targets(const geo::FeatureTable& table) const;

    friend bool operator==(const ModelContext&, const ModelContext&) = default;
};

// Fits the standardizers on a training table. Either side can be switched
// to the identity map.
ModelContext make_context(const geo::GridSpec& grid, const geo::TimeSpec& timespec, const geo::FeatureTable& train,
                          bool standardize_inputs = true, bool standardize_targets = true);

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    std::vector<int> dist_hidden{128, 64, 32};
    std::vector<int> time_hidden{128, 64, 32};
    nn::Activation hidden_activation = nn::Activation::ReLU;
    // Stop the time loss at the distance module's last hidden layer.
    bool detach_time_path = false;

    void validate() const;
};

struct JointPrediction {
    double distance = 0.0;  // miles
    double time = 0.0;      // seconds
};

// Distance module on the four coordinate features; its last hidden
// activations, stacked with the time feature, feed the time module.
struct StnnModel {
    ModelContext context;
    nn::Mlp distance_module;
    nn::Mlp time_module;

    friend bool operator==(const StnnModel&, const StnnModel&) = default;
};

StnnModel init_stnn(const ModelContext& context, const TrainConfig& config);

// Validates that the two modules fit together.
void check_stnn_shapes(const StnnModel& model);

struct StnnForward {
    Eigen::RowVectorXd distance;  // miles
    Eigen::RowVectorXd time;      // seconds
    Eigen::MatrixXd outputs;      // 2 x B standardized {distance, time}
    nn::ForwardCache distance_cache;
    nn::ForwardCache time_cache;
};

// `features` holds standardized feature columns (kFeatureCount x B).
StnnForward stnn_forward(const StnnModel& model, const Eigen::MatrixXd& features);
JointPrediction stnn_forward(const StnnModel& model, const geo::FeatureVector& fv);

// (1/2N) sum (Y_T - Yhat_T)^2 + (1/2N) sum (Y_D - Yhat_D)^2
double joint_loss(const Eigen::VectorXd& distance, const Eigen::VectorXd& time,
                  const Eigen::VectorXd& predicted_distance, const Eigen::VectorXd& predicted_time);

enum class LossTerms { Both, TimeOnly, DistanceOnly };

struct JointGradients {
    nn::Gradients distance_module;
    nn::Gradients time_module;
    double time_loss = 0.0;
    double distance_loss = 0.0;
};

// Gradients of the joint loss on one batch. `targets` is 2 x B standardized.
JointGradients joint_gradients(const StnnModel& model, const Eigen::MatrixXd& features,
                               const Eigen::MatrixXd& targets, LossTerms terms = LossTerms::Both,
                               bool detach_time_path = false);

struct JointLossRecord {
    double joint = 0.0;
    double time = 0.0;
    double distance = 0.0;
};

struct JointTrainResult {
    StnnModel model;
    std::vector<JointLossRecord> history;  // full training set, after each epoch
};

JointTrainResult train_joint(StnnModel model, const geo::FeatureTable& train, const TrainConfig& config);

// featurize -> standardize -> forward. Throws OutOfBoundsError for
// coordinates outside the model grid.
JointPrediction predict(const StnnModel& model, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch);

}  // namespace stnn
