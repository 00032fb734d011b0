#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gradcheck.hpp"
#include "stnn/error.hpp"
#include "stnn/joint_model.hpp"
#include "stnn/metrics.hpp"
#include "stnn/synthcity.hpp"

using namespace stnn;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

ModelContext toy_context()
{
    Eigen::VectorXd fmean(5), fstd(5);
    fmean << 40.7, -74.0, 40.7, -74.0, 144.0;
    fstd << 0.1, 0.1, 0.1, 0.1, 80.0;
    Eigen::VectorXd tmean(2), tstd(2);
    tmean << 3.0, 900.0;
    tstd << 2.0, 500.0;
    return {geo::GridSpec{}, geo::TimeSpec{}, geo::Standardizer(fmean, fstd), geo::Standardizer(tmean, tstd)};
}

TrainConfig tiny_config(std::uint64_t seed)
{
    TrainConfig config;
    config.dist_hidden = {3, 2};
    config.time_hidden = {2};
    config.hidden_activation = nn::Activation::Tanh;
    config.seed = seed;
    return config;
}

StnnModel perturbed(StnnModel model, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 0.3);
    for (auto* m : {&model.distance_module, &model.time_module}) {
        for (Eigen::Index i = 0; i < m->parameter_count(); ++i) m->parameter(i) += n(rng);
    }
    return model;
}

struct SmallCity {
    synth::CityConfig city;
    std::vector<trips::TripRecord> train;
    std::vector<trips::TripRecord> test;
    geo::FeatureTable table;
    ModelContext context;
};

SmallCity small_city()
{
    SmallCity s;
    s.city = synth::default_city();
    s.city.noise_sigma = 0.0;
    const auto trips = synth::sample_trips(s.city, 5000, 21);
    const auto split = trips::split_train_test(trips, 0.2, 21);
    s.train = split.train;
    s.test = split.test;
    const geo::GridSpec grid(s.city.bbox, 200.0);
    s.table = geo::build_feature_table(s.train, grid, geo::TimeSpec{});
    s.context = make_context(grid, geo::TimeSpec{}, s.table);
    return s;
}

TrainConfig city_config()
{
    TrainConfig config;
    config.dist_hidden = {32, 16};
    config.time_hidden = {32, 16};
    config.epochs = 15;
    config.batch_size = 32;
    config.learning_rate = 0.05;
    config.seed = 3;
    return config;
}

}  // namespace

TEST(ModelKindTest, TagsAndParsing)
{
    EXPECT_EQ(model_tag(ModelKind::Stnn), "STNN");
    EXPECT_EQ(model_tag(ModelKind::DistNn), "DISTNN");
    EXPECT_EQ(parse_model_kind("st-nn"), ModelKind::Stnn);
    EXPECT_EQ(parse_model_kind("TimeNN"), ModelKind::TimeNn);
    EXPECT_EQ(parse_model_kind("lrd"), ModelKind::Lrd);
    EXPECT_THROW(parse_model_kind("bte"), ConfigError);
    EXPECT_TRUE(predicts_time(ModelKind::Stnn) && predicts_distance(ModelKind::Stnn));
    EXPECT_FALSE(predicts_distance(ModelKind::Lrt));
    EXPECT_FALSE(predicts_time(ModelKind::DistNn));
}

TEST(InitStnn, ShapesFollowConfig)
{
    const auto model = init_stnn(toy_context(), TrainConfig{});
    EXPECT_EQ(model.distance_module.input_dim(), 4);
    EXPECT_EQ(model.distance_module.layer_count(), 4u);
    EXPECT_EQ(model.time_module.input_dim(), 33);
    EXPECT_EQ(model.time_module.layer_count(), 4u);
    EXPECT_EQ(model.time_module.layer(0).out_dim(), 128);
    EXPECT_EQ(model.distance_module.output_dim(), 1);
    EXPECT_EQ(model.time_module.output_dim(), 1);
}

TEST(InitStnn, InvalidConfig)
{
    auto config = TrainConfig{};
    config.learning_rate = 0.0;
    EXPECT_THROW(init_stnn(toy_context(), config), ConfigError);
    config = TrainConfig{};
    config.batch_size = 0;
    EXPECT_THROW(init_stnn(toy_context(), config), ConfigError);
    config = TrainConfig{};
    config.time_hidden = {};
    EXPECT_THROW(init_stnn(toy_context(), config), ConfigError);
    config = TrainConfig{};
    config.dist_hidden = {8, -1};
    EXPECT_THROW(init_stnn(toy_context(), config), ConfigError);
}

TEST(StnnForward, ZeroModelPredictsTargetMeans)
{
    auto model = init_stnn(toy_context(), TrainConfig{});
    for (auto* m : {&model.distance_module, &model.time_module}) {
        for (Eigen::Index i = 0; i < m->parameter_count(); ++i) m->parameter(i) = 0.0;
    }
    const geo::FeatureVector fv{40.75, -73.98, 40.71, -74.0, 100};
    const auto p = stnn_forward(model, fv);
    EXPECT_EQ(p.distance, 3.0);
    EXPECT_EQ(p.time, 900.0);
}

TEST(StnnForward, TimeBinOnlyMovesTime)
{
    std::mt19937_64 rng(1);
    const auto model = perturbed(init_stnn(toy_context(), TrainConfig{}), rng);
    geo::FeatureVector fv{40.75, -73.98, 40.71, -74.0, 10};
    const auto a = stnn_forward(model, fv);
    fv.time_bin = 200;
    const auto b = stnn_forward(model, fv);
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_NE(a.time, b.time);
}

TEST(StnnForward, PermutedTimeBinsLeaveDistanceBitIdentical)
{
    std::mt19937_64 rng(2);
    const auto model = perturbed(init_stnn(toy_context(), TrainConfig{}), rng);
    auto features = random_matrix(5, 64, rng);
    const auto before = stnn_forward(model, features);
    Eigen::RowVectorXd time_row = features.row(4);
    std::shuffle(time_row.data(), time_row.data() + time_row.size(), rng);
    features.row(4) = time_row;
    const auto after = stnn_forward(model, features);
    EXPECT_EQ(before.distance, after.distance);
}

TEST(StnnForward, EqualsHandComposedModules)
{
    std::mt19937_64 rng(3);
    const auto context = toy_context();
    const auto model = perturbed(init_stnn(context, tiny_config(5)), rng);
    const geo::FeatureVector fv{40.76, -73.97, 40.72, -74.01, 37};
    const Eigen::VectorXd z = context.features.apply(Eigen::MatrixXd(fv.values()));

    // Distance module by hand, keeping its last hidden activation.
    Eigen::VectorXd a = z.head(4);
    Eigen::VectorXd last_hidden;
    for (std::size_t k = 0; k < model.distance_module.layer_count(); ++k) {
        const auto& layer = model.distance_module.layer(k);
        Eigen::VectorXd pre = layer.weights * a + layer.bias;
        a = layer.activation == nn::Activation::Tanh ? Eigen::VectorXd(pre.array().tanh()) : pre;
        if (k + 2 == model.distance_module.layer_count()) last_hidden = a;
    }
    const double dist_std = a[0];
    Eigen::VectorXd t(last_hidden.size() + 1);
    t << last_hidden, z[4];
    for (std::size_t k = 0; k < model.time_module.layer_count(); ++k) {
        const auto& layer = model.time_module.layer(k);
        Eigen::VectorXd pre = layer.weights * t + layer.bias;
        t = layer.activation == nn::Activation::Tanh ? Eigen::VectorXd(pre.array().tanh()) : pre;
    }
    const auto p = stnn_forward(model, fv);
    EXPECT_NEAR(p.distance, dist_std * 2.0 + 3.0, 1e-12);
    EXPECT_NEAR(p.time, t[0] * 500.0 + 900.0, 1e-9);
}

TEST(StnnForward, RejectsWrongFeatureCount)
{
    const auto model = init_stnn(toy_context(), tiny_config(0));
    EXPECT_THROW(stnn_forward(model, Eigen::MatrixXd::Zero(4, 3)), ShapeError);
}

TEST(JointLoss, Examples)
{
    std::mt19937_64 rng(4);
    const Eigen::VectorXd d = random_matrix(7, 1, rng);
    const Eigen::VectorXd t = random_matrix(7, 1, rng);
    EXPECT_EQ(joint_loss(d, t, d, t), 0.0);

    const Eigen::VectorXd pd = random_matrix(7, 1, rng);
    const Eigen::VectorXd pt = random_matrix(7, 1, rng);
    EXPECT_DOUBLE_EQ(joint_loss(d, t, pd, pt), nn::mse_loss(t, pt) + nn::mse_loss(d, pd));

    Eigen::VectorXd one_d(1), one_t(1), hat_d(1), hat_t(1);
    one_d << 1.0;
    one_t << 5.0;
    hat_d << 2.0;  // residual 1
    hat_t << 7.0;  // residual 2
    EXPECT_EQ(joint_loss(one_d, one_t, hat_d, hat_t), 2.5);
    EXPECT_THROW(joint_loss(d, t, pd.head(3), pt), ShapeError);
}

TEST(JointGradients, TinyModelMatchesFiniteDifferences)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto model = perturbed(init_stnn(toy_context(), tiny_config(rng())), rng);
        const auto features = random_matrix(5, 5, rng);
        const auto targets = random_matrix(2, 5, rng);
        const auto err = check::check_joint_gradients(model, features, targets);
        EXPECT_LT(err.distance_module, 1e-5);
        EXPECT_LT(err.time_module, 1e-5);
    }
}

TEST(JointGradients, AdditiveOverLossTerms)
{
    std::mt19937_64 rng(6);
    const auto model = perturbed(init_stnn(toy_context(), tiny_config(9)), rng);
    const auto features = random_matrix(5, 8, rng);
    const auto targets = random_matrix(2, 8, rng);
    const auto both = joint_gradients(model, features, targets, LossTerms::Both);
    const auto time_only = joint_gradients(model, features, targets, LossTerms::TimeOnly);
    const auto dist_only = joint_gradients(model, features, targets, LossTerms::DistanceOnly);
    for (Eigen::Index i = 0; i < both.distance_module.parameter_count(); ++i) {
        EXPECT_NEAR(both.distance_module.parameter(i),
                    time_only.distance_module.parameter(i) + dist_only.distance_module.parameter(i), 1e-14);
    }
    // The shared hidden layers receive both contributions.
    double time_share = 0.0;
    double dist_share = 0.0;
    for (Eigen::Index i = 0; i < model.distance_module.layer(0).parameter_count(); ++i) {
        time_share += std::abs(time_only.distance_module.parameter(i));
        dist_share += std::abs(dist_only.distance_module.parameter(i));
    }
    EXPECT_GT(time_share, 0.0);
    EXPECT_GT(dist_share, 0.0);
    // The time loss never reaches the distance head.
    const auto& head = time_only.distance_module.layers.back();
    EXPECT_EQ(head.weights.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(head.bias.cwiseAbs().maxCoeff(), 0.0);
}

TEST(JointGradients, DetachStopsTimeLossAtDistanceModule)
{
    std::mt19937_64 rng(7);
    const auto model = perturbed(init_stnn(toy_context(), tiny_config(2)), rng);
    const auto features = random_matrix(5, 6, rng);
    const auto targets = random_matrix(2, 6, rng);
    const auto detached = joint_gradients(model, features, targets, LossTerms::TimeOnly, true);
    for (Eigen::Index i = 0; i < detached.distance_module.parameter_count(); ++i) {
        EXPECT_EQ(detached.distance_module.parameter(i), 0.0);
    }
    const auto attached = joint_gradients(model, features, targets, LossTerms::Both, false);
    const auto detached_both = joint_gradients(model, features, targets, LossTerms::Both, true);
    const auto dist_only = joint_gradients(model, features, targets, LossTerms::DistanceOnly, false);
    for (Eigen::Index i = 0; i < attached.time_module.parameter_count(); ++i) {
        EXPECT_EQ(attached.time_module.parameter(i), detached_both.time_module.parameter(i));
    }
    for (Eigen::Index i = 0; i < dist_only.distance_module.parameter_count(); ++i) {
        EXPECT_EQ(detached_both.distance_module.parameter(i), dist_only.distance_module.parameter(i));
    }
}

TEST(TrainJoint, ZeroEpochsLeavesModel)
{
    auto city = small_city();
    auto config = city_config();
    config.epochs = 0;
    const auto model = init_stnn(city.context, config);
    const auto result = train_joint(model, city.table, config);
    EXPECT_EQ(result.model, model);
    EXPECT_TRUE(result.history.empty());
}

TEST(TrainJoint, LearnsSyntheticCity)
{
    const auto city = small_city();
    const auto config = city_config();
    const auto result = train_joint(init_stnn(city.context, config), city.table, config);
    ASSERT_EQ(result.history.size(), config.epochs);
    EXPECT_LT(result.history.back().joint, result.history.front().joint);
    for (const auto& h : result.history) {
        EXPECT_DOUBLE_EQ(h.joint, h.time + h.distance);
    }

    // Deterministic given the seed.
    const auto again = train_joint(init_stnn(city.context, config), city.table, config);
    EXPECT_EQ(again.model, result.model);

    // Test MAE of the trained model, then queries at training trips' cells
    // fall within that MAE of the noise-free oracle on average.
    std::vector<double> y, f;
    for (const auto& trip : city.test) {
        y.push_back(trip.travel_time);
        f.push_back(predict(result.model, {trip.origin_lat, trip.origin_lon}, {trip.dest_lat, trip.dest_lon},
                            trip.pickup_epoch)
                        .time);
    }
    const double test_mae = metrics::mae(y, f);
    std::vector<double> oracle, predicted;
    for (std::size_t i = 0; i < 200; ++i) {
        const auto& trip = city.train[i];
        const auto fv = geo::featurize(trip, city.context.grid, city.context.timespec).first;
        const geo::LatLon o{fv.origin_lat_bin, fv.origin_lon_bin};
        const geo::LatLon d{fv.dest_lat_bin, fv.dest_lon_bin};
        oracle.push_back(synth::oracle_time(city.city, o, d, trip.pickup_epoch));
        predicted.push_back(predict(result.model, o, d, trip.pickup_epoch).time);
    }
    EXPECT_LT(metrics::mae(oracle, predicted), test_mae * 1.5);
    EXPECT_LT(test_mae, 0.5 * metrics::mae(y, std::vector<double>(y.size(), city.table.time.mean())));
}

TEST(Predict, SameCellsSameOutputAndOutsideThrows)
{
    std::mt19937_64 rng(8);
    const auto model = perturbed(init_stnn(toy_context(), tiny_config(1)), rng);
    const auto a = predict(model, {40.75001, -73.98001}, {40.70001, -74.00001}, 1362570600);
    const auto b = predict(model, {40.75003, -73.98003}, {40.70003, -74.00003}, 1362570660);
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_EQ(a.time, b.time);
    EXPECT_THROW(predict(model, {41.5, -73.98}, {40.7, -74.0}, 1362570600), OutOfBoundsError);
}

TEST(MakeContext, StandardizationSwitches)
{
    const auto city = small_city();
    const auto plain = make_context(city.context.grid, geo::TimeSpec{}, city.table, false, false);
    EXPECT_EQ(plain.features, geo::Standardizer::identity(5));
    EXPECT_EQ(plain.targets, geo::Standardizer::identity(2));
    const Eigen::MatrixXd z = city.context.standardized_targets(city.table);
    EXPECT_NEAR(z.row(0).mean(), 0.0, 1e-9);
    EXPECT_NEAR(z.row(1).mean(), 0.0, 1e-9);
    EXPECT_THROW(make_context(city.context.grid, geo::TimeSpec{}, geo::FeatureTable{}, true, true), DataError);
}
