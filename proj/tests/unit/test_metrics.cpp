#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "metric_oracle.hpp"
#include "stnn/error.hpp"
#include "stnn/metrics.hpp"

using namespace stnn;
using namespace stnn::metrics;

using V = std::vector<double>;

TEST(Mae, Examples)
{
    EXPECT_EQ(mae(V{10, 20}, V{12, 16}), 3.0);
    EXPECT_EQ(mae(V{4, 5, 6}, V{4, 5, 6}), 0.0);
    EXPECT_EQ(mae(V{10, 20, 30}, V{11, 18, 30}), mae(V{30, 10, 20}, V{30, 11, 18}));
}

TEST(Mre, Examples)
{
    EXPECT_DOUBLE_EQ(mre(V{10, 20}, V{12, 16}), 0.2);
    EXPECT_EQ(mre(V{4, 5}, V{4, 5}), 0.0);
    EXPECT_DOUBLE_EQ(mre(V{30, 60}, V{36, 48}), 0.2);
    EXPECT_THROW(mre(V{0, 0}, V{1, 1}), DataError);
    EXPECT_THROW(mre(V{-5, 2}, V{1, 1}), DataError);
}

TEST(Medians, Examples)
{
    EXPECT_EQ(medae(V{10, 10, 10}, V{11, 12, 110}), 2.0);
    EXPECT_EQ(medae(V{10, 10}, V{11, 13}), 2.0);
    EXPECT_EQ(medae(V{3, 4}, V{3, 4}), 0.0);
    EXPECT_EQ(medre(V{3, 4}, V{3, 4}), 0.0);
    EXPECT_EQ(medre(V{10, 100, 1}, V{11, 150, 1}), 0.1);
    EXPECT_THROW(medre(V{1, 0}, V{1, 0}), DataError);
    EXPECT_EQ(median(V{4, 1, 3, 2}), 2.5);
}

TEST(R2, Examples)
{
    EXPECT_EQ(r2(V{1, 2, 3}, V{1, 2, 3}), 1.0);
    EXPECT_EQ(r2(V{1, 2, 3}, V{3, 2, 1}), -3.0);
    EXPECT_EQ(r2(V{1, 2, 3}, V{2, 2, 2}), 0.0);
    EXPECT_THROW(r2(V{5, 5, 5}, V{1, 2, 3}), DataError);
    EXPECT_THROW(r2(V{5}, V{5}), DataError);
}

TEST(Metrics, LengthErrors)
{
    EXPECT_THROW(mae(V{}, V{}), DataError);
    EXPECT_THROW(mae(V{1, 2}, V{1}), DataError);
    EXPECT_THROW(medae(V{}, V{}), DataError);
    EXPECT_THROW(make_report(V{1}, V{}, "time", "s"), DataError);
}

TEST(Metrics, TrainMeanPredictorHasZeroR2)
{
    std::mt19937_64 rng(8);
    std::lognormal_distribution<double> d(6.0, 0.7);
    for (int rep = 0; rep < 20; ++rep) {
        V y(37 + rep);
        for (auto& v : y) v = d(rng);
        double mean = 0.0;
        for (const double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        EXPECT_EQ(r2(y, V(y.size(), mean)), 0.0);
    }
}

TEST(Metrics, MatchOracleOnRandomVectors)
{
    std::mt19937_64 rng(9);
    std::lognormal_distribution<double> target(6.0, 0.8);
    std::normal_distribution<double> noise(0.0, 120.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + rep % 41;
        V y(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = target(rng);
            f[i] = y[i] + noise(rng);
        }
        const auto o = check::oracle_metrics(y, f);
        EXPECT_LT(check::scaled_gap(mae(y, f), o.mae), 1e-12);
        EXPECT_LT(check::scaled_gap(mre(y, f), o.mre), 1e-12);
        EXPECT_LT(check::scaled_gap(medae(y, f), o.medae), 1e-12);
        EXPECT_LT(check::scaled_gap(medre(y, f), o.medre), 1e-12);
        EXPECT_LT(check::scaled_gap(r2(y, f), o.r2), 1e-12);
    }
}

TEST(Metrics, Properties)
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 * static_cast<std::size_t>(rep % 20) + 3;
        V y(n), f(n), res(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = u(rng);
            f[i] = u(rng);
            res[i] = std::abs(y[i] - f[i]);
        }
        const double lo = *std::min_element(res.begin(), res.end());
        const double hi = *std::max_element(res.begin(), res.end());
        const double m = mae(y, f);
        const double md = medae(y, f);
        EXPECT_LE(lo, m * (1 + 1e-15));
        EXPECT_LE(m, hi * (1 + 1e-15));
        EXPECT_LE(lo, md);
        EXPECT_LE(md, hi);
        EXPECT_LE(r2(y, f), 1.0);
        EXPECT_GE(mre(y, f), 0.0);

        // Push the largest residual further out: MedAE stays put for odd N.
        const auto worst = static_cast<std::size_t>(std::max_element(res.begin(), res.end()) - res.begin());
        auto g = f;
        g[worst] = y[worst] + (f[worst] >= y[worst] ? 1.0 : -1.0) * (hi + 1e6);
        EXPECT_EQ(medae(y, g), md);

        // Scaling both sides leaves MRE unchanged.
        V ys(y), fs(f);
        for (std::size_t i = 0; i < n; ++i) {
            ys[i] *= 7.5;
            fs[i] *= 7.5;
        }
        EXPECT_NEAR(mre(ys, fs), mre(y, f), 1e-14);
    }
}

TEST(MakeReport, UndefinedMetricsAreNaN)
{
    const auto report = make_report(V{0, 0, 0}, V{1, 2, 3}, "distance", "mi");
    EXPECT_EQ(report.n, 3u);
    EXPECT_EQ(report.mae, 2.0);
    EXPECT_EQ(report.medae, 2.0);
    EXPECT_TRUE(std::isnan(report.mre));
    EXPECT_TRUE(std::isnan(report.medre));
    EXPECT_TRUE(std::isnan(report.r2));

    const auto ok = make_report(V{10, 20}, V{12, 16}, "time", "s");
    EXPECT_EQ(ok.mae, 3.0);
    EXPECT_DOUBLE_EQ(ok.mre, 0.2);
    EXPECT_EQ(ok.medae, 3.0);
    EXPECT_DOUBLE_EQ(ok.medre, 0.2);

    std::ostringstream out;
    write_report(out, report);
    EXPECT_NE(out.str().find("mre: nan"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("mae: 2"), std::string::npos) << out.str();
}

TEST(Curve, SingleBin)
{
    const V y{10, 20, 30}, f{11, 18, 33};
    const auto c = binned_mae_curve(y, f, V{1, 2, 3}, 100.0);
    ASSERT_EQ(c.mae.size(), 1u);
    EXPECT_EQ(c.mae[0], mae(y, f));
    EXPECT_EQ(c.counts[0], 3u);
    EXPECT_EQ(c.lower_edges[0], 0.0);
}

TEST(Curve, TwoBins)
{
    const auto c = binned_mae_curve(V{10, 10}, V{11, 13}, V{5, 15}, 10.0);
    ASSERT_EQ(c.mae.size(), 2u);
    EXPECT_EQ(c.mae[0], 1.0);
    EXPECT_EQ(c.mae[1], 3.0);
    EXPECT_EQ(c.lower_edges[1], 10.0);
}

TEST(Curve, EmptyBinsAreKept)
{
    const auto c = binned_mae_curve(V{1, 1}, V{2, 2}, V{5, 35}, 10.0);
    ASSERT_EQ(c.mae.size(), 4u);
    EXPECT_EQ(c.counts[1], 0u);
    EXPECT_TRUE(std::isnan(c.mae[1]));
    EXPECT_TRUE(std::isnan(c.mae[2]));
    std::ostringstream out;
    write_curve_csv(out, c, "travel_time_s");
    EXPECT_NE(out.str().find("nan"), std::string::npos);
    EXPECT_THROW(binned_mae_curve(V{1}, V{1}, V{1}, 0.0), DataError);
    EXPECT_THROW(binned_mae_curve(V{1}, V{1}, V{1, 2}, 1.0), DataError);
}

TEST(Curve, WeightedMeanIdentity)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 3000.0);
    V y(500), f(500);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = u(rng);
        f[i] = u(rng);
    }
    const auto c = binned_mae_curve(y, f, y, 120.0);
    std::size_t total = 0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < c.mae.size(); ++k) {
        total += c.counts[k];
        if (c.counts[k] > 0) weighted += c.mae[k] * static_cast<double>(c.counts[k]);
        if (k > 0) EXPECT_LT(c.lower_edges[k - 1], c.lower_edges[k]);
    }
    EXPECT_EQ(total, y.size());
    EXPECT_NEAR(weighted / static_cast<double>(total), mae(y, f), 1e-9);
}

TEST(Ecdf, Examples)
{
    const auto one = ecdf(V{5});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].value, 5.0);
    EXPECT_EQ(one[0].fraction, 1.0);

    const auto p = ecdf(V{4, 2, 1, 2});
    ASSERT_EQ(p.size(), 4u);
    const V values{1, 2, 2, 4}, fractions{0.25, 0.75, 0.75, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(p[i].value, values[i]);
        EXPECT_EQ(p[i].fraction, fractions[i]);
    }
    EXPECT_THROW(ecdf(V{}), DataError);
}

TEST(Ecdf, Monotone)
{
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> u(0, 30);
    V v(300);
    for (auto& x : v) x = u(rng);
    const auto p = ecdf(v);
    for (std::size_t i = 1; i < p.size(); ++i) {
        EXPECT_LE(p[i - 1].value, p[i].value);
        EXPECT_LE(p[i - 1].fraction, p[i].fraction);
        EXPECT_GT(p[i].fraction, 0.0);
    }
    EXPECT_EQ(p.back().fraction, 1.0);
}

TEST(FormatNumber, RoundTrips)
{
    EXPECT_EQ(format_number(0.2), "0.2");
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_number(third)), third);
}
