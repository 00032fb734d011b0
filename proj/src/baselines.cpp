#include "stnn/baselines.hpp"

#include <string>

#include "stnn/error.hpp"

namespace stnn::baselines {

LinearModel fit_linear(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets, double ridge_epsilon)
{
    if (features.cols() == 0) {
        throw DataError("linear regression needs at least one sample");
    }
    if (features.cols() != targets.size()) {
        throw ShapeError("linear regression: " + std::to_string(features.cols()) + " samples but " +
                         std::to_string(targets.size()) + " targets");
    }
    if (!(ridge_epsilon >= 0.0)) {
        throw ConfigError("ridge epsilon must be non-negative");
    }
    // Centering removes the unpenalized intercept from the normal equations.
    const Eigen::VectorXd x_mean = features.rowwise().mean();
    const double y_mean = targets.mean();
    const Eigen::MatrixXd xc = features.colwise() - x_mean;
    const Eigen::VectorXd yc = targets.array() - y_mean;

    Eigen::MatrixXd gram = xc * xc.transpose();
    gram.diagonal().array() += ridge_epsilon;
    const Eigen::VectorXd rhs = xc * yc;

    LinearModel model;
    model.weights = gram.ldlt().solve(rhs);
    if (!model.weights.allFinite()) {
        // Fully degenerate design (e.g. one sample with zero ridge).
        model.weights = gram.completeOrthogonalDecomposition().solve(rhs);
    }
    model.intercept = y_mean - model.weights.dot(x_mean);
    return model;
}

double predict_linear(const LinearModel& model, const Eigen::VectorXd& x)
{
    if (x.size() != model.weights.size()) {
        throw ShapeError("linear model expects " + std::to_string(model.weights.size()) + " features, got " +
                         std::to_string(x.size()));
    }
    return model.weights.dot(x) + model.intercept;
}

Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& features)
{
    if (features.rows() != model.weights.size()) {
        throw ShapeError("linear model expects " + std::to_string(model.weights.size()) + " feature rows, got " +
                         std::to_string(features.rows()));
    }
    return (features.transpose() * model.weights).array() + model.intercept;
}

double linear_objective(const LinearModel& model, const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                        double ridge_epsilon)
{
    return (targets - predict_linear(model, features)).squaredNorm() + ridge_epsilon * model.weights.squaredNorm();
}

Eigen::Index baseline_input_dim(ModelKind kind)
{
    switch (kind) {
        case ModelKind::Lrt:
        case ModelKind::TimeNn: return geo::kFeatureCount;
        case ModelKind::Lrd:
        case ModelKind::DistNn: return geo::kCoordinateFeatures;
        case ModelKind::Stnn: break;
    }
    throw ConfigError("ST-NN is not a baseline model kind");
}

Eigen::MatrixXd baseline_inputs(ModelKind kind, const Eigen::MatrixXd& standardized_features)
{
    if (standardized_features.rows() != geo::kFeatureCount) {
        throw ShapeError("baseline inputs need the full feature matrix");
    }
    return standardized_features.topRows(baseline_input_dim(kind));
}

namespace {

Eigen::Index target_row(ModelKind kind)
{
    return predicts_time(kind) ? kTimeTarget : kDistanceTarget;
}

LinearBaseline train_linear(ModelKind kind, const ModelContext& context, const geo::FeatureTable& train,
                            double ridge_epsilon)
{
    if (train.size() == 0) {
        throw DataError("training set is empty");
    }
    const auto inputs = baseline_inputs(kind, context.standardized_features(train));
    const Eigen::VectorXd& y = (kind == ModelKind::Lrt) ? train.time : train.distance;
    return {kind, context, fit_linear(inputs, y, ridge_epsilon)};
}

NetBaseline init_net(ModelKind kind, const ModelContext& context, const std::vector<int>& hidden,
                     const TrainConfig& config)
{
    config.validate();
    std::vector<int> dims{static_cast<int>(baseline_input_dim(kind))};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(1);
    return {kind, context, nn::init_mlp(dims, config.hidden_activation, config.seed)};
}

}  // namespace

LinearBaseline train_lrt(const ModelContext& context, const geo::FeatureTable& train, double ridge_epsilon)
{
    return train_linear(ModelKind::Lrt, context, train, ridge_epsilon);
}

LinearBaseline train_lrd(const ModelContext& context, const geo::FeatureTable& train, double ridge_epsilon)
{
    return train_linear(ModelKind::Lrd, context, train, ridge_epsilon);
}

NetBaseline init_timenn(const ModelContext& context, const TrainConfig& config)
{
    return init_net(ModelKind::TimeNn, context, config.time_hidden, config);
}

NetBaseline init_distnn(const ModelContext& context, const TrainConfig& config)
{
    return init_net(ModelKind::DistNn, context, config.dist_hidden, config);
}

NetTrainResult train_net_baseline(NetBaseline model, const geo::FeatureTable& train, const TrainConfig& config)
{
    config.validate();
    if (train.size() == 0) {
        throw DataError("training set is empty");
    }
    nn::Dataset data{baseline_inputs(model.kind, model.context.standardized_features(train)),
                     model.context.standardized_targets(train).row(target_row(model.kind))};
    auto trained = nn::train_epochs(std::move(model.net), data,
                                    {config.batch_size, config.learning_rate, config.epochs, config.seed});
    model.net = std::move(trained.mlp);
    return {std::move(model), std::move(trained.loss_history)};
}

NetTrainResult train_timenn(const ModelContext& context, const geo::FeatureTable& train, const TrainConfig& config)
{
    return train_net_baseline(init_timenn(context, config), train, config);
}

NetTrainResult train_distnn(const ModelContext& context, const geo::FeatureTable& train, const TrainConfig& config)
{
    return train_net_baseline(init_distnn(context, config), train, config);
}

Eigen::RowVectorXd predict_baseline(const LinearBaseline& model, const Eigen::MatrixXd& standardized_features)
{
    return predict_linear(model.model, baseline_inputs(model.kind, standardized_features)).transpose();
}

Eigen::RowVectorXd predict_baseline(const NetBaseline& model, const Eigen::MatrixXd& standardized_features)
{
    const Eigen::RowVectorXd out = nn::predict(model.net, baseline_inputs(model.kind, standardized_features));
    const auto row = target_row(model.kind);
    return (out.array() * model.context.targets.stddev()[row] + model.context.targets.mean()[row]).matrix();
}

}  // namespace stnn::baselines
