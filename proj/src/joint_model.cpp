#include "stnn/joint_model.hpp"

#include <cmath>
#include <string>

#include "stnn/error.hpp"

namespace stnn {

std::string_view model_tag(ModelKind kind)
{
    switch (kind) {
        case ModelKind::Stnn: return "STNN";
        case ModelKind::Lrt: return "LRT";
        case ModelKind::Lrd: return "LRD";
        case ModelKind::TimeNn: return "TIMENN";
        case ModelKind::DistNn: return "DISTNN";
    }
    return "UNKNOWN";
}

ModelKind parse_model_kind(std::string_view name)
{
    std::string upper(name);
    for (auto& c : upper) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (upper == "STNN" || upper == "ST-NN") return ModelKind::Stnn;
    if (upper == "LRT") return ModelKind::Lrt;
    if (upper == "LRD") return ModelKind::Lrd;
    if (upper == "TIMENN") return ModelKind::TimeNn;
    if (upper == "DISTNN") return ModelKind::DistNn;
    throw ConfigError("unknown model kind \"" + std::string(name) + "\" (expected stnn, lrt, lrd, timenn, distnn)");
}

bool predicts_time(ModelKind kind)
{
    return kind == ModelKind::Stnn || kind == ModelKind::Lrt || kind == ModelKind::TimeNn;
}

bool predicts_distance(ModelKind kind)
{
    return kind == ModelKind::Stnn || kind == ModelKind::Lrd || kind == ModelKind::DistNn;
}

// --- context ------------------------------------------------------------------

Eigen::MatrixXd ModelContext::standardized_features(const geo::FeatureTable& table) const
{
    return features.apply(table.features);
}

Eigen::MatrixXd ModelContext::standardized_targets(const geo::FeatureTable& table) const
{
    Eigen::MatrixXd raw(2, table.size());
    raw.row(kDistanceTarget) = table.distance.transpose();
    raw.row(kTimeTarget) = table.time.transpose();
    return targets.apply(raw);
}

ModelContext make_context(const geo::GridSpec& grid, const geo::TimeSpec& timespec, const geo::FeatureTable& train,
                          bool standardize_inputs, bool standardize_targets)
{
    if (train.size() == 0) {
        throw DataError("cannot fit model standardizers on an empty training set");
    }
    timespec.validate();
    ModelContext ctx{grid, timespec, geo::Standardizer::identity(geo::kFeatureCount), geo::Standardizer::identity(2)};
    if (standardize_inputs) {
        ctx.features = geo::fit_standardizer(train.features);
    }
    if (standardize_targets) {
        Eigen::MatrixXd raw(2, train.size());
        raw.row(kDistanceTarget) = train.distance.transpose();
        raw.row(kTimeTarget) = train.time.transpose();
        ctx.targets = geo::fit_standardizer(raw);
    }
    return ctx;
}

// --- model ----------------------------------------------------------------------

void TrainConfig::validate() const
{
    if (batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
    if (dist_hidden.empty() || time_hidden.empty()) {
        throw ConfigError("both modules need at least one hidden layer");
    }
    for (const int w : dist_hidden) {
        if (w <= 0) throw ConfigError("hidden widths must be positive");
    }
    for (const int w : time_hidden) {
        if (w <= 0) throw ConfigError("hidden widths must be positive");
    }
}

namespace {

std::vector<int> module_dims(int input, const std::vector<int>& hidden)
{
    std::vector<int> dims{input};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(1);
    return dims;
}

Eigen::Index last_hidden_width(const nn::Mlp& distance_module)
{
    return distance_module.layer(distance_module.layer_count() - 2).out_dim();
}

}  // namespace

StnnModel init_stnn(const ModelContext& context, const TrainConfig& config)
{
    config.validate();
    const auto dist_dims = module_dims(geo::kCoordinateFeatures, config.dist_hidden);
    const auto time_dims = module_dims(config.dist_hidden.back() + 1, config.time_hidden);
    // Separate seeds so the two modules do not share a weight stream.
    StnnModel model{context, nn::init_mlp(dist_dims, config.hidden_activation, config.seed),
                    nn::init_mlp(time_dims, config.hidden_activation, config.seed ^ 0x9E3779B97F4A7C15ULL)};
    check_stnn_shapes(model);
    return model;
}

void check_stnn_shapes(const StnnModel& model)
{
    const auto& dist = model.distance_module;
    const auto& time = model.time_module;
    if (dist.layer_count() < 2 || dist.input_dim() != geo::kCoordinateFeatures || dist.output_dim() != 1) {
        throw ShapeError("distance module must map 4 coordinates through at least one hidden layer to 1 output");
    }
    if (time.input_dim() != last_hidden_width(dist) + 1 || time.output_dim() != 1) {
        throw ShapeError("time module input must be the distance module's last hidden width + 1");
    }
    if (model.context.features.dims() != geo::kFeatureCount || model.context.targets.dims() != 2) {
        throw ShapeError("model standardizers have the wrong dimensionality");
    }
}

StnnForward stnn_forward(const StnnModel& model, const Eigen::MatrixXd& features)
{
    if (features.rows() != geo::kFeatureCount) {
        throw ShapeError("ST-NN expects " + std::to_string(geo::kFeatureCount) + " feature rows, got " +
                         std::to_string(features.rows()));
    }
    const auto& dist = model.distance_module;
    StnnForward out;

    auto dist_pass = nn::forward(dist, features.topRows(geo::kCoordinateFeatures));
    const auto& hidden = dist_pass.cache.activations[dist.layer_count() - 2];

    Eigen::MatrixXd time_input(hidden.rows() + 1, features.cols());
    time_input.topRows(hidden.rows()) = hidden;
    time_input.bottomRows(1) = features.bottomRows(1);
    auto time_pass = nn::forward(model.time_module, time_input);

    out.outputs.resize(2, features.cols());
    out.outputs.row(kDistanceTarget) = dist_pass.output;
    out.outputs.row(kTimeTarget) = time_pass.output;
    const Eigen::MatrixXd raw = model.context.targets.invert(out.outputs);
    out.distance = raw.row(kDistanceTarget);
    out.time = raw.row(kTimeTarget);
    out.distance_cache = std::move(dist_pass.cache);
    out.time_cache = std::move(time_pass.cache);
    return out;
}

JointPrediction stnn_forward(const StnnModel& model, const geo::FeatureVector& fv)
{
    const auto pass = stnn_forward(model, model.context.features.apply(fv.values()));
    return {pass.distance[0], pass.time[0]};
}

double joint_loss(const Eigen::VectorXd& distance, const Eigen::VectorXd& time,
                  const Eigen::VectorXd& predicted_distance, const Eigen::VectorXd& predicted_time)
{
    if (distance.size() != time.size() || distance.size() != predicted_distance.size() ||
        time.size() != predicted_time.size()) {
        throw ShapeError("joint loss inputs differ in length");
    }
    return nn::mse_loss(time, predicted_time) + nn::mse_loss(distance, predicted_distance);
}

JointGradients joint_gradients(const StnnModel& model, const Eigen::MatrixXd& features,
                               const Eigen::MatrixXd& targets, LossTerms terms, bool detach_time_path)
{
    if (targets.rows() != 2 || targets.cols() != features.cols()) {
        throw ShapeError("joint targets must be 2 x batch");
    }
    const auto pass = stnn_forward(model, features);
    const Eigen::MatrixXd predicted_distance = pass.outputs.row(kDistanceTarget);
    const Eigen::MatrixXd predicted_time = pass.outputs.row(kTimeTarget);
    const Eigen::MatrixXd distance = targets.row(kDistanceTarget);
    const Eigen::MatrixXd time = targets.row(kTimeTarget);

    JointGradients out;
    out.distance_loss = nn::mse_loss(distance, predicted_distance);
    out.time_loss = nn::mse_loss(time, predicted_time);

    Eigen::MatrixXd grad_time = nn::mse_loss_gradient(time, predicted_time);
    Eigen::MatrixXd grad_distance = nn::mse_loss_gradient(distance, predicted_distance);
    if (terms == LossTerms::DistanceOnly) {
        grad_time.setZero();
    }
    if (terms == LossTerms::TimeOnly) {
        grad_distance.setZero();
    }

    auto time_back = nn::backward(model.time_module, pass.time_cache, grad_time);
    out.time_module = std::move(time_back.grads);

    const auto hidden_layer = model.distance_module.layer_count() - 2;
    if (detach_time_path) {
        out.distance_module = nn::backward(model.distance_module, pass.distance_cache, grad_distance).grads;
    } else {
        const Eigen::MatrixXd grad_hidden =
            time_back.input_gradient.topRows(time_back.input_gradient.rows() - 1);
        out.distance_module =
            nn::backward(model.distance_module, pass.distance_cache, grad_distance, hidden_layer, &grad_hidden).grads;
    }
    return out;
}

JointTrainResult train_joint(StnnModel model, const geo::FeatureTable& train, const TrainConfig& config)
{
    config.validate();
    check_stnn_shapes(model);
    if (train.size() == 0) {
        throw DataError("training set is empty");
    }
    const Eigen::MatrixXd features = model.context.standardized_features(train);
    const Eigen::MatrixXd targets = model.context.standardized_targets(train);

    JointTrainResult result{std::move(model), {}};
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& batch : nn::epoch_batches(features.cols(), config.batch_size, config.seed, epoch)) {
            const auto grads = joint_gradients(result.model, nn::gather_columns(features, batch),
                                               nn::gather_columns(targets, batch), LossTerms::Both,
                                               config.detach_time_path);
            nn::sgd_step_in_place(result.model.distance_module, grads.distance_module, config.learning_rate);
            nn::sgd_step_in_place(result.model.time_module, grads.time_module, config.learning_rate);
        }
        const auto pass = stnn_forward(result.model, features);
        JointLossRecord record;
        record.distance = nn::mse_loss(targets.row(kDistanceTarget), pass.outputs.row(kDistanceTarget));
        record.time = nn::mse_loss(targets.row(kTimeTarget), pass.outputs.row(kTimeTarget));
        record.joint = record.time + record.distance;
        result.history.push_back(record);
    }
    return result;
}

JointPrediction predict(const StnnModel& model, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch)
{
    const auto fv = geo::featurize_query(model.context.grid, model.context.timespec, origin, dest, pickup_epoch);
    return stnn_forward(model, fv);
}

}  // namespace stnn
