#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stnn::nn {

enum class Activation : std::uint8_t { Identity = 0, ReLU = 1, Tanh = 2 };

std::string_view to_string(Activation activation);
Activation parse_activation(std::string_view name);

struct Layer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
    Activation activation = Activation::Identity;

    Eigen::Index in_dim() const { return weights.cols(); }
    Eigen::Index out_dim() const { return weights.rows(); }
    Eigen::Index parameter_count() const { return weights.size() + bias.size(); }
};

// Feed-forward network. Construction validates that layer shapes chain and
// that the last layer is linear.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<Layer> layers);

    Eigen::Index input_dim() const { return layers_.front().in_dim(); }
    Eigen::Index output_dim() const { return layers_.back().out_dim(); }
    std::size_t layer_count() const { return layers_.size(); }
    Eigen::Index parameter_count() const;

    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(std::size_t k) const { return layers_.at(k); }
    // Shape-preserving mutable access; weights may change, dimensions may not.
    Eigen::MatrixXd& weights(std::size_t k) { return layers_.at(k).weights; }
    Eigen::VectorXd& bias(std::size_t k) { return layers_.at(k).bias; }

    // Flat parameter view in declaration order: W_0 (column-major), b_0, W_1, ...
    double& parameter(Eigen::Index flat_index);
    double parameter(Eigen::Index flat_index) const;

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    std::vector<Layer> layers_;
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), zero biases. Hidden layers
// use `hidden`; the output layer is Identity.
Mlp init_mlp(std::span<const int> layer_dims, Activation hidden, std::uint64_t seed);

struct ForwardCache {
    Eigen::MatrixXd input;                         // in x B
    std::vector<Eigen::MatrixXd> pre_activations;  // per layer, out_k x B
    std::vector<Eigen::MatrixXd> activations;      // per layer, out_k x B
};

struct LayerGradient {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;
};

struct Gradients {
    std::vector<LayerGradient> layers;

    static Gradients zeros_like(const Mlp& mlp);
    Gradients& operator+=(const Gradients& other);
    double& parameter(Eigen::Index flat_index);
    double parameter(Eigen::Index flat_index) const;
    Eigen::Index parameter_count() const;
};

struct ForwardResult {
    Eigen::MatrixXd output;  // out x B
    ForwardCache cache;
};

// Columns of `inputs` are samples.
ForwardResult forward(const Mlp& mlp, const Eigen::MatrixXd& inputs);
// Forward without keeping the cache.
Eigen::MatrixXd predict(const Mlp& mlp, const Eigen::MatrixXd& inputs);

// (1/2N) * sum_i ||y_i - yhat_i||^2 over the N columns.
double mse_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions);
// Gradient of mse_loss with respect to the predictions.
Eigen::MatrixXd mse_loss_gradient(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions);

struct BackwardResult {
    Gradients grads;
    Eigen::MatrixXd input_gradient;  // in x B
};

// Backpropagates dL/dy through the cached pass. `hidden_gradient`, when
// given, is an extra dL/d(activation) added at the output of layer
// `hidden_layer`; this is how a downstream module that consumes hidden
// activations sends its gradient back.
BackwardResult backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_gradient,
                        std::optional<std::size_t> hidden_layer = std::nullopt,
                        const Eigen::MatrixXd* hidden_gradient = nullptr);

// Central differences over every parameter of `mlp` for an arbitrary scalar
// objective of the network.
Gradients finite_diff_grad(const Mlp& mlp, const std::function<double(const Mlp&)>& objective,
                           double epsilon = 1e-6);

using LossFn = std::function<double(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions)>;
Gradients finite_diff_grad(const Mlp& mlp, const LossFn& loss, const Eigen::MatrixXd& inputs,
                           const Eigen::MatrixXd& targets, double epsilon = 1e-6);

// theta <- theta - lr * g. lr must be >= 0.
Mlp sgd_step(const Mlp& mlp, const Gradients& grads, double learning_rate);
void sgd_step_in_place(Mlp& mlp, const Gradients& grads, double learning_rate);

struct Dataset {
    Eigen::MatrixXd inputs;   // in x N
    Eigen::MatrixXd targets;  // out x N
};

struct EpochSchedule {
    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    std::size_t epochs = 20;
    std::uint64_t seed = 0;
};

// Seeded per-epoch shuffle split into mini-batches. Indices inside each batch
// are sorted ascending so a single full batch reproduces the unshuffled
// full-gradient step bit-for-bit.
std::vector<std::vector<Eigen::Index>> epoch_batches(Eigen::Index n, std::size_t batch_size, std::uint64_t seed,
                                                     std::size_t epoch);

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& source, std::span<const Eigen::Index> columns);

struct TrainResult {
    Mlp mlp;
    std::vector<double> loss_history;  // full-dataset mse_loss after each epoch
};

TrainResult train_epochs(Mlp mlp, const Dataset& data, const EpochSchedule& schedule);

}  // namespace stnn::nn
