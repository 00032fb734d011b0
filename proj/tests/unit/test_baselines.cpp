#include <gtest/gtest.h>

#include <random>

#include "gradcheck.hpp"
#include "stnn/baselines.hpp"
#include "stnn/error.hpp"
#include "stnn/synthcity.hpp"

using namespace stnn;
using namespace stnn::baselines;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

struct CityData {
    geo::FeatureTable table;
    ModelContext context;
};

CityData city_data(std::size_t n)
{
    auto city = synth::default_city();
    city.noise_sigma = 0.0;
    const auto trips = synth::sample_trips(city, n, 5);
    const geo::GridSpec grid(city.bbox, 200.0);
    CityData d;
    d.table = geo::build_feature_table(trips, grid, geo::TimeSpec{});
    d.context = make_context(grid, geo::TimeSpec{}, d.table);
    return d;
}

TrainConfig small_config()
{
    TrainConfig config;
    config.dist_hidden = {16, 8};
    config.time_hidden = {16, 8};
    config.epochs = 8;
    config.batch_size = 32;
    config.learning_rate = 0.05;
    config.seed = 2;
    return config;
}

}  // namespace

TEST(FitLinear, RecoversExactHyperplane)
{
    std::mt19937_64 rng(1);
    const auto x = random_matrix(5, 40, rng);
    Eigen::VectorXd w(5);
    w << 1.5, -2.0, 0.25, 3.0, -0.5;
    const Eigen::VectorXd y = (x.transpose() * w).array() + 7.0;
    const auto model = fit_linear(x, y);
    EXPECT_LT((model.weights - w).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(model.intercept, 7.0, 1e-9);
}

TEST(FitLinear, SingleSampleIsInterpolated)
{
    Eigen::MatrixXd x(4, 1);
    x << 1, 2, 3, 4;
    Eigen::VectorXd y(1);
    y << 42.0;
    for (const double ridge : {1e-8, 0.0}) {
        const auto model = fit_linear(x, y, ridge);
        EXPECT_NEAR(predict_linear(model, Eigen::VectorXd(x.col(0))), 42.0, 1e-12);
    }
}

TEST(FitLinear, MatchesGradientDescentOnSameObjective)
{
    std::mt19937_64 rng(2);
    const auto x = random_matrix(3, 60, rng);
    const Eigen::VectorXd y = random_matrix(60, 1, rng);
    const double ridge = 0.5;
    const auto closed = fit_linear(x, y, ridge);

    // Full-batch gradient descent on sum (y - w.x - b)^2 + ridge |w|^2.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
    double b = 0.0;
    for (int it = 0; it < 20000; ++it) {
        const Eigen::VectorXd r = (x.transpose() * w).array() + b - y.array();
        const Eigen::VectorXd gw = 2.0 * x * r + 2.0 * ridge * w;
        const double gb = 2.0 * r.sum();
        w -= 2e-3 * gw;
        b -= 2e-3 * gb;
    }
    EXPECT_LT((closed.weights - w).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(closed.intercept, b, 1e-6);
}

TEST(FitLinear, PerturbationIncreasesObjective)
{
    std::mt19937_64 rng(3);
    const auto x = random_matrix(5, 50, rng);
    const Eigen::VectorXd y = random_matrix(50, 1, rng);
    const double ridge = 1e-8;
    const auto model = fit_linear(x, y, ridge);
    const double best = linear_objective(model, x, y, ridge);
    for (int i = 0; i < 100; ++i) {
        auto moved = model;
        moved.weights += 1e-3 * random_matrix(5, 1, rng);
        EXPECT_GT(linear_objective(moved, x, y, ridge), best);
    }
}

TEST(FitLinear, ResidualsSumToZero)
{
    std::mt19937_64 rng(4);
    const auto x = random_matrix(4, 80, rng);
    const Eigen::VectorXd y = random_matrix(80, 1, rng).array() * 10.0 + 3.0;
    const auto model = fit_linear(x, y);
    EXPECT_NEAR((y - predict_linear(model, x)).sum(), 0.0, 1e-9);
}

TEST(FitLinear, Errors)
{
    EXPECT_THROW(fit_linear(Eigen::MatrixXd(3, 0), Eigen::VectorXd(0)), DataError);
    EXPECT_THROW(fit_linear(Eigen::MatrixXd::Zero(3, 4), Eigen::VectorXd::Zero(3)), ShapeError);
    EXPECT_THROW(fit_linear(Eigen::MatrixXd::Zero(3, 4), Eigen::VectorXd::Zero(4), -1.0), ConfigError);
}

TEST(PredictLinear, Examples)
{
    LinearModel zero{Eigen::VectorXd::Zero(5), 5.0};
    std::mt19937_64 rng(5);
    EXPECT_EQ(predict_linear(zero, Eigen::VectorXd(random_matrix(5, 1, rng))), 5.0);

    LinearModel pick{Eigen::VectorXd::Unit(5, 0), 0.0};
    Eigen::VectorXd x(5);
    x << 3, 9, 9, 9, 9;
    EXPECT_EQ(predict_linear(pick, x), 3.0);
    EXPECT_THROW(predict_linear(pick, Eigen::VectorXd(Eigen::VectorXd::Zero(4))), ShapeError);
}

TEST(LinearBaselines, InputDimensions)
{
    const auto d = city_data(500);
    const auto lrt = train_lrt(d.context, d.table);
    const auto lrd = train_lrd(d.context, d.table);
    EXPECT_EQ(lrt.model.weights.size(), 5);
    EXPECT_EQ(lrd.model.weights.size(), 4);
    EXPECT_EQ(baseline_input_dim(ModelKind::Lrd), 4);
    EXPECT_THROW(baseline_input_dim(ModelKind::Stnn), ConfigError);

    // LRD ignores the time bin entirely.
    Eigen::MatrixXd z = d.context.standardized_features(d.table);
    const auto before = predict_baseline(lrd, z);
    z.row(4).setConstant(123.0);
    EXPECT_EQ(before, predict_baseline(lrd, z));

    // Raw units: the mean prediction over the training set equals the mean target.
    EXPECT_NEAR(predict_baseline(lrt, d.context.standardized_features(d.table)).mean(), d.table.time.mean(), 1e-6);
}

TEST(NetBaselines, ZeroEpochsUnchanged)
{
    const auto d = city_data(300);
    auto config = small_config();
    config.epochs = 0;
    const auto init = init_timenn(d.context, config);
    const auto trained = train_net_baseline(init, d.table, config);
    EXPECT_EQ(trained.model, init);
    EXPECT_TRUE(trained.loss_history.empty());
    EXPECT_EQ(init.net.input_dim(), 5);
    EXPECT_EQ(init_distnn(d.context, config).net.input_dim(), 4);
}

TEST(NetBaselines, LossDecreasesOnSyntheticCity)
{
    const auto d = city_data(3000);
    const auto config = small_config();
    const auto timenn = train_timenn(d.context, d.table, config);
    const auto distnn = train_distnn(d.context, d.table, config);
    ASSERT_EQ(timenn.loss_history.size(), config.epochs);
    EXPECT_LT(timenn.loss_history.back(), timenn.loss_history.front());
    EXPECT_LT(distnn.loss_history.back(), distnn.loss_history.front());
    EXPECT_EQ(timenn.model.kind, ModelKind::TimeNn);
    EXPECT_EQ(distnn.model.kind, ModelKind::DistNn);
    const auto again = train_timenn(d.context, d.table, config);
    EXPECT_EQ(again.model, timenn.model);
}

TEST(NetBaselines, GradientCheckOnTinyInstances)
{
    const auto d = city_data(200);
    TrainConfig config;
    config.dist_hidden = {3, 2};
    config.time_hidden = {3, 2};
    config.hidden_activation = nn::Activation::Tanh;
    const Eigen::MatrixXd z = d.context.standardized_features(d.table).leftCols(6);
    const Eigen::MatrixXd targets = d.context.standardized_targets(d.table).leftCols(6);
    for (const auto kind : {ModelKind::TimeNn, ModelKind::DistNn}) {
        const auto model = kind == ModelKind::TimeNn ? init_timenn(d.context, config) : init_distnn(d.context, config);
        const Eigen::MatrixXd x = baseline_inputs(kind, z);
        const Eigen::MatrixXd y = targets.row(kind == ModelKind::TimeNn ? kTimeTarget : kDistanceTarget);
        const auto pass = nn::forward(model.net, x);
        const auto back = nn::backward(model.net, pass.cache, nn::mse_loss_gradient(y, pass.output));
        const auto numeric = nn::finite_diff_grad(model.net, nn::LossFn(nn::mse_loss), x, y);
        EXPECT_LT(check::max_relative_error(back.grads, numeric), 1e-5);
    }
}

TEST(NetBaselines, TimeNnOutputsSeconds)
{
    const auto d = city_data(300);
    auto config = small_config();
    config.epochs = 0;
    auto model = init_timenn(d.context, config);
    for (Eigen::Index i = 0; i < model.net.parameter_count(); ++i) model.net.parameter(i) = 0.0;
    const auto out = predict_baseline(model, d.context.standardized_features(d.table));
    EXPECT_NEAR(out[0], d.table.time.mean(), 1e-9);
}
