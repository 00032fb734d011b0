#include "stnn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "stnn/error.hpp"

namespace stnn::nn {

namespace {

Eigen::MatrixXd activate(Activation activation, const Eigen::MatrixXd& z)
{
    switch (activation) {
        case Activation::Identity: return z;
        case Activation::ReLU: return z.cwiseMax(0.0);
        case Activation::Tanh: return z.array().tanh().matrix();
    }
    throw ConfigError("unknown activation");
}

// dL/dz given dL/da, with a = f(z).
Eigen::MatrixXd activation_backward(Activation activation, const Eigen::MatrixXd& z, const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& grad_a)
{
    switch (activation) {
        case Activation::Identity: return grad_a;
        case Activation::ReLU: return (z.array() > 0.0).select(grad_a, 0.0);
        case Activation::Tanh: return (grad_a.array() * (1.0 - a.array().square())).matrix();
    }
    throw ConfigError("unknown activation");
}

std::string shape(const Eigen::MatrixXd& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Locates a flat parameter index as (layer, is_bias, offset).
struct ParameterSlot {
    std::size_t layer;
    bool is_bias;
    Eigen::Index offset;
};

template <typename LayerSizes>
ParameterSlot locate(const LayerSizes& sizes, Eigen::Index flat_index)
{
    if (flat_index < 0) {
        throw OutOfBoundsError("negative parameter index");
    }
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const auto [w, b] = sizes[k];
        if (flat_index < w) {
            return {k, false, flat_index};
        }
        flat_index -= w;
        if (flat_index < b) {
            return {k, true, flat_index};
        }
        flat_index -= b;
    }
    throw OutOfBoundsError("parameter index past the end of the network");
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> layer_sizes(const std::vector<Layer>& layers)
{
    std::vector<std::pair<Eigen::Index, Eigen::Index>> sizes;
    for (const auto& l : layers) {
        sizes.emplace_back(l.weights.size(), l.bias.size());
    }
    return sizes;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> layer_sizes(const std::vector<LayerGradient>& layers)
{
    std::vector<std::pair<Eigen::Index, Eigen::Index>> sizes;
    for (const auto& l : layers) {
        sizes.emplace_back(l.weights.size(), l.bias.size());
    }
    return sizes;
}

void check_congruent(const Mlp& mlp, const Gradients& grads)
{
    if (grads.layers.size() != mlp.layer_count()) {
        throw ShapeError("gradient has " + std::to_string(grads.layers.size()) + " layers, network has " +
                         std::to_string(mlp.layer_count()));
    }
    for (std::size_t k = 0; k < grads.layers.size(); ++k) {
        const auto& l = mlp.layer(k);
        const auto& g = grads.layers[k];
        if (g.weights.rows() != l.weights.rows() || g.weights.cols() != l.weights.cols() ||
            g.bias.size() != l.bias.size()) {
            throw ShapeError("gradient shape mismatch at layer " + std::to_string(k));
        }
    }
}

}  // namespace

std::string_view to_string(Activation activation)
{
    switch (activation) {
        case Activation::Identity: return "identity";
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "unknown";
}

Activation parse_activation(std::string_view text)
{
    std::string name(text);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    throw ConfigError("unknown activation \"" + std::string(name) + "\" (expected relu, tanh or identity)");
}

// --- Mlp ----------------------------------------------------------------------

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers))
{
    if (layers_.empty()) {
        throw ShapeError("a network needs at least one layer");
    }
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto& l = layers_[k];
        if (l.weights.rows() == 0 || l.weights.cols() == 0) {
            throw ShapeError("layer " + std::to_string(k) + " has an empty weight matrix");
        }
        if (l.bias.size() != l.weights.rows()) {
            throw ShapeError("layer " + std::to_string(k) + " bias length " + std::to_string(l.bias.size()) +
                             " does not match weight rows " + std::to_string(l.weights.rows()));
        }
        if (k > 0 && l.weights.cols() != layers_[k - 1].weights.rows()) {
            throw ShapeError("layer " + std::to_string(k) + " expects " + std::to_string(l.weights.cols()) +
                             " inputs but the previous layer emits " + std::to_string(layers_[k - 1].weights.rows()));
        }
    }
    if (layers_.back().activation != Activation::Identity) {
        throw ShapeError("the output layer must be linear (Identity activation)");
    }
}

Eigen::Index Mlp::parameter_count() const
{
    Eigen::Index count = 0;
    for (const auto& l : layers_) {
        count += l.parameter_count();
    }
    return count;
}

double& Mlp::parameter(Eigen::Index flat_index)
{
    const auto slot = locate(layer_sizes(layers_), flat_index);
    auto& l = layers_[slot.layer];
    return slot.is_bias ? l.bias[slot.offset] : l.weights.data()[slot.offset];
}

double Mlp::parameter(Eigen::Index flat_index) const
{
    return const_cast<Mlp&>(*this).parameter(flat_index);
}

bool operator==(const Mlp& a, const Mlp& b)
{
    if (a.layers_.size() != b.layers_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.layers_.size(); ++k) {
        const auto& x = a.layers_[k];
        const auto& y = b.layers_[k];
        if (x.activation != y.activation || x.weights.rows() != y.weights.rows() ||
            x.weights.cols() != y.weights.cols() || x.weights != y.weights || x.bias != y.bias) {
            return false;
        }
    }
    return true;
}

Mlp init_mlp(std::span<const int> layer_dims, Activation hidden, std::uint64_t seed)
{
    if (layer_dims.size() < 2) {
        throw ConfigError("layer dims need an input and an output size");
    }
    if (std::any_of(layer_dims.begin(), layer_dims.end(), [](int d) { return d <= 0; })) {
        throw ConfigError("layer dims must be positive");
    }
    std::mt19937_64 rng(seed);
    std::vector<Layer> layers;
    for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
        const int fan_in = layer_dims[k];
        const int fan_out = layer_dims[k + 1];
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-scale, scale);
        Layer layer;
        layer.weights.resize(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                layer.weights(r, c) = dist(rng);
            }
        }
        layer.bias = Eigen::VectorXd::Zero(fan_out);
        layer.activation = (k + 2 == layer_dims.size()) ? Activation::Identity : hidden;
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers));
}

// --- Gradients ----------------------------------------------------------------

Gradients Gradients::zeros_like(const Mlp& mlp)
{
    Gradients g;
    for (const auto& l : mlp.layers()) {
        g.layers.push_back({Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                            Eigen::VectorXd::Zero(l.bias.size())});
    }
    return g;
}

Gradients& Gradients::operator+=(const Gradients& other)
{
    if (other.layers.size() != layers.size()) {
        throw ShapeError("cannot add gradients of different depth");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (layers[k].weights.rows() != other.layers[k].weights.rows() ||
            layers[k].weights.cols() != other.layers[k].weights.cols() ||
            layers[k].bias.size() != other.layers[k].bias.size()) {
            throw ShapeError("cannot add gradients of different shape");
        }
        layers[k].weights += other.layers[k].weights;
        layers[k].bias += other.layers[k].bias;
    }
    return *this;
}

double& Gradients::parameter(Eigen::Index flat_index)
{
    const auto slot = locate(layer_sizes(layers), flat_index);
    auto& l = layers[slot.layer];
    return slot.is_bias ? l.bias[slot.offset] : l.weights.data()[slot.offset];
}

double Gradients::parameter(Eigen::Index flat_index) const
{
    return const_cast<Gradients&>(*this).parameter(flat_index);
}

Eigen::Index Gradients::parameter_count() const
{
    Eigen::Index count = 0;
    for (const auto& l : layers) {
        count += l.weights.size() + l.bias.size();
    }
    return count;
}

// --- forward / loss / backward ------------------------------------------------

ForwardResult forward(const Mlp& mlp, const Eigen::MatrixXd& inputs)
{
    if (inputs.rows() != mlp.input_dim()) {
        throw ShapeError("network expects " + std::to_string(mlp.input_dim()) + "-dimensional input, got " +
                         shape(inputs));
    }
    ForwardResult result;
    result.cache.input = inputs;
    result.cache.pre_activations.reserve(mlp.layer_count());
    result.cache.activations.reserve(mlp.layer_count());
    const Eigen::MatrixXd* current = &result.cache.input;
    for (const auto& l : mlp.layers()) {
        Eigen::MatrixXd z = l.weights * (*current);
        z.colwise() += l.bias;
        result.cache.activations.push_back(activate(l.activation, z));
        result.cache.pre_activations.push_back(std::move(z));
        current = &result.cache.activations.back();
    }
    result.output = result.cache.activations.back();
    return result;
}

Eigen::MatrixXd predict(const Mlp& mlp, const Eigen::MatrixXd& inputs)
{
    if (inputs.rows() != mlp.input_dim()) {
        throw ShapeError("network expects " + std::to_string(mlp.input_dim()) + "-dimensional input, got " +
                         shape(inputs));
    }
    Eigen::MatrixXd current = inputs;
    for (const auto& l : mlp.layers()) {
        Eigen::MatrixXd z = l.weights * current;
        z.colwise() += l.bias;
        current = activate(l.activation, z);
    }
    return current;
}

double mse_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions)
{
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols()) {
        throw ShapeError("loss inputs differ in shape: " + shape(targets) + " vs " + shape(predictions));
    }
    if (targets.cols() == 0) {
        throw ShapeError("loss needs at least one sample");
    }
    return (targets - predictions).squaredNorm() / (2.0 * static_cast<double>(targets.cols()));
}

Eigen::MatrixXd mse_loss_gradient(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions)
{
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols() || targets.cols() == 0) {
        throw ShapeError("loss inputs differ in shape: " + shape(targets) + " vs " + shape(predictions));
    }
    return (predictions - targets) / static_cast<double>(targets.cols());
}

BackwardResult backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_gradient,
                        std::optional<std::size_t> hidden_layer, const Eigen::MatrixXd* hidden_gradient)
{
    const auto depth = mlp.layer_count();
    if (cache.activations.size() != depth || cache.pre_activations.size() != depth ||
        cache.input.rows() != mlp.input_dim()) {
        throw ShapeError("forward cache was not produced by this network");
    }
    const auto batch = cache.input.cols();
    for (std::size_t k = 0; k < depth; ++k) {
        if (cache.activations[k].rows() != mlp.layer(k).out_dim() || cache.activations[k].cols() != batch) {
            throw ShapeError("forward cache was not produced by this network");
        }
    }
    if (output_gradient.rows() != mlp.output_dim() || output_gradient.cols() != batch) {
        throw ShapeError("output gradient must be " + std::to_string(mlp.output_dim()) + "x" +
                         std::to_string(batch) + ", got " + shape(output_gradient));
    }
    if (hidden_layer.has_value() != (hidden_gradient != nullptr)) {
        throw ShapeError("hidden gradient and hidden layer index must be given together");
    }
    if (hidden_layer) {
        if (*hidden_layer >= depth) {
            throw ShapeError("hidden layer index out of range");
        }
        if (hidden_gradient->rows() != mlp.layer(*hidden_layer).out_dim() || hidden_gradient->cols() != batch) {
            throw ShapeError("hidden gradient shape " + shape(*hidden_gradient) + " does not match layer " +
                             std::to_string(*hidden_layer));
        }
    }

    BackwardResult result;
    result.grads.layers.resize(depth);
    Eigen::MatrixXd grad_a = output_gradient;
    for (std::size_t step = 0; step < depth; ++step) {
        const auto k = depth - 1 - step;
        const auto& l = mlp.layer(k);
        if (hidden_layer && *hidden_layer == k) {
            grad_a += *hidden_gradient;
        }
        const Eigen::MatrixXd grad_z = activation_backward(l.activation, cache.pre_activations[k],
                                                           cache.activations[k], grad_a);
        const Eigen::MatrixXd& layer_input = (k == 0) ? cache.input : cache.activations[k - 1];
        result.grads.layers[k].weights = grad_z * layer_input.transpose();
        result.grads.layers[k].bias = grad_z.rowwise().sum();
        grad_a = l.weights.transpose() * grad_z;
    }
    result.input_gradient = std::move(grad_a);
    return result;
}

// --- finite differences -------------------------------------------------------

Gradients finite_diff_grad(const Mlp& mlp, const std::function<double(const Mlp&)>& objective, double epsilon)
{
    Gradients grads = Gradients::zeros_like(mlp);
    Mlp probe = mlp;
    for (Eigen::Index i = 0; i < mlp.parameter_count(); ++i) {
        const double original = probe.parameter(i);
        probe.parameter(i) = original + epsilon;
        const double plus = objective(probe);
        probe.parameter(i) = original - epsilon;
        const double minus = objective(probe);
        probe.parameter(i) = original;
        grads.parameter(i) = (plus - minus) / (2.0 * epsilon);
    }
    return grads;
}

Gradients finite_diff_grad(const Mlp& mlp, const LossFn& loss, const Eigen::MatrixXd& inputs,
                           const Eigen::MatrixXd& targets, double epsilon)
{
    return finite_diff_grad(
        mlp, [&](const Mlp& probe) { return loss(targets, predict(probe, inputs)); }, epsilon);
}

// --- SGD ------------------------------------------------------------------------

void sgd_step_in_place(Mlp& mlp, const Gradients& grads, double learning_rate)
{
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be a finite non-negative number");
    }
    check_congruent(mlp, grads);
    for (std::size_t k = 0; k < mlp.layer_count(); ++k) {
        mlp.weights(k) -= learning_rate * grads.layers[k].weights;
        mlp.bias(k) -= learning_rate * grads.layers[k].bias;
    }
}

Mlp sgd_step(const Mlp& mlp, const Gradients& grads, double learning_rate)
{
    Mlp updated = mlp;
    sgd_step_in_place(updated, grads, learning_rate);
    return updated;
}

std::vector<std::vector<Eigen::Index>> epoch_batches(Eigen::Index n, std::size_t batch_size, std::uint64_t seed,
                                                     std::size_t epoch)
{
    if (batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<Eigen::Index>> batches;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
        const auto end = std::min(order.size(), start + batch_size);
        std::vector<Eigen::Index> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                        order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(batch.begin(), batch.end());
        batches.push_back(std::move(batch));
    }
    return batches;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& source, std::span<const Eigen::Index> columns)
{
    Eigen::MatrixXd out(source.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = source.col(columns[j]);
    }
    return out;
}

TrainResult train_epochs(Mlp mlp, const Dataset& data, const EpochSchedule& schedule)
{
    if (schedule.batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    if (data.inputs.cols() == 0) {
        throw DataError("training set is empty");
    }
    if (data.inputs.cols() != data.targets.cols() || data.inputs.rows() != mlp.input_dim() ||
        data.targets.rows() != mlp.output_dim()) {
        throw ShapeError("dataset shape does not match the network");
    }
    TrainResult result{std::move(mlp), {}};
    for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
        for (const auto& batch : epoch_batches(data.inputs.cols(), schedule.batch_size, schedule.seed, epoch)) {
            const auto x = gather_columns(data.inputs, batch);
            const auto y = gather_columns(data.targets, batch);
            const auto pass = forward(result.mlp, x);
            const auto back = backward(result.mlp, pass.cache, mse_loss_gradient(y, pass.output));
            sgd_step_in_place(result.mlp, back.grads, schedule.learning_rate);
        }
        result.loss_history.push_back(mse_loss(data.targets, predict(result.mlp, data.inputs)));
    }
    return result;
}

}  // namespace stnn::nn
