#pragma once

#include <vector>

#include <Eigen/Dense>

#include "stnn/geobin.hpp"
#include "stnn/joint_model.hpp"
#include "stnn/mlp.hpp"

namespace stnn::baselines {

struct LinearModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Minimizes sum (y - w.x - b)^2 + ridge * ||w||^2 in closed form. The
// intercept is not penalized. `features` is d x N.
LinearModel fit_linear(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets, double ridge_epsilon = 1e-8);

double predict_linear(const LinearModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& features);

// Regularized least-squares objective minimized by fit_linear.
double linear_objective(const LinearModel& model, const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                        double ridge_epsilon);

// LRT fits time on all five standardized features, LRD fits distance on
// the four coordinate features. Targets stay in raw units.
struct LinearBaseline {
    ModelKind kind = ModelKind::Lrt;
    ModelContext context;
    LinearModel model;

    friend bool operator==(const LinearBaseline&, const LinearBaseline&) = default;
};

// TimeNN: 5 features -> time. DistNN: 4 coordinate features -> distance.
// Outputs are in standardized target units.
struct NetBaseline {
    ModelKind kind = ModelKind::TimeNn;
    ModelContext context;
    nn::Mlp net;

    friend bool operator==(const NetBaseline&, const NetBaseline&) = default;
};

Eigen::Index baseline_input_dim(ModelKind kind);

// Rows of the standardized feature matrix the baseline consumes.
Eigen::MatrixXd baseline_inputs(ModelKind kind, const Eigen::MatrixXd& standardized_features);

LinearBaseline train_lrt(const ModelContext& context, const geo::FeatureTable& train, double ridge_epsilon = 1e-8);
LinearBaseline train_lrd(const ModelContext& context, const geo::FeatureTable& train, double ridge_epsilon = 1e-8);

struct NetTrainResult {
    NetBaseline model;
    std::vector<double> loss_history;
};

// Untrained network with the same hidden layout as the matching ST-NN module.
NetBaseline init_timenn(const ModelContext& context, const TrainConfig& config);
NetBaseline init_distnn(const ModelContext& context, const TrainConfig& config);

NetTrainResult train_net_baseline(NetBaseline model, const geo::FeatureTable& train, const TrainConfig& config);
NetTrainResult train_timenn(const ModelContext& context, const geo::FeatureTable& train, const TrainConfig& config);
NetTrainResult train_distnn(const ModelContext& context, const geo::FeatureTable& train, const TrainConfig& config);

// Raw-unit predictions for a table of standardized features (kFeatureCount x B).
Eigen::RowVectorXd predict_baseline(const LinearBaseline& model, const Eigen::MatrixXd& standardized_features);
Eigen::RowVectorXd predict_baseline(const NetBaseline& model, const Eigen::MatrixXd& standardized_features);

}  // namespace stnn::baselines
