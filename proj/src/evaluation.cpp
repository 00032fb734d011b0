#include "stnn/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <thread>

#include "stnn/error.hpp"

namespace stnn::eval {

namespace {

constexpr Eigen::Index kChunk = 1024;

struct ChunkOutput {
    Eigen::RowVectorXd time;
    Eigen::RowVectorXd distance;
};

ChunkOutput predict_chunk(const AnyModel& model, const Eigen::MatrixXd& standardized)
{
    ChunkOutput out;
    if (const auto* m = std::get_if<StnnModel>(&model)) {
        auto pass = stnn_forward(*m, standardized);
        out.time = std::move(pass.time);
        out.distance = std::move(pass.distance);
    } else if (const auto* m = std::get_if<baselines::LinearBaseline>(&model)) {
        (predicts_time(m->kind) ? out.time : out.distance) = baselines::predict_baseline(*m, standardized);
    } else {
        const auto& net = std::get<baselines::NetBaseline>(model);
        (predicts_time(net.kind) ? out.time : out.distance) = baselines::predict_baseline(net, standardized);
    }
    return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

}  // namespace

Predictions predict_table(const AnyModel& model, const geo::FeatureTable& table, unsigned threads)
{
    const auto kind = kind_of(model);
    const auto& context = context_of(model);
    const auto n = table.size();
    const Eigen::MatrixXd standardized = context.standardized_features(table);

    Eigen::RowVectorXd time(predicts_time(kind) ? n : 0);
    Eigen::RowVectorXd distance(predicts_distance(kind) ? n : 0);
    const Eigen::Index chunks = (n + kChunk - 1) / kChunk;
    const auto run_chunk = [&](Eigen::Index c) {
        const auto start = c * kChunk;
        const auto width = std::min(kChunk, n - start);
        const auto out = predict_chunk(model, standardized.middleCols(start, width));
        if (time.size() > 0) time.segment(start, width) = out.time;
        if (distance.size() > 0) distance.segment(start, width) = out.distance;
    };

    const auto workers = static_cast<Eigen::Index>(std::max(1u, threads));
    if (workers == 1 || chunks <= 1) {
        for (Eigen::Index c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (Eigen::Index w = 0; w < std::min(workers, chunks); ++w) {
            pool.emplace_back([&, w] {
                for (Eigen::Index c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    Predictions p;
    p.kind = kind;
    p.features = table.features;
    p.true_time = to_vector(table.time);
    p.true_distance = to_vector(table.distance);
    p.predicted_time.assign(time.data(), time.data() + time.size());
    p.predicted_distance.assign(distance.data(), distance.data() + distance.size());
    p.time_bin.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        p.time_bin[static_cast<std::size_t>(i)] = table.features(geo::kFeatureCount - 1, i);
    }
    return p;
}

ModelEvaluation evaluate(const AnyModel& model, std::span<const trips::TripRecord> test, unsigned threads)
{
    if (test.empty()) {
        throw DataError("test set is empty");
    }
    const auto& context = context_of(model);
    std::vector<trips::TripRecord> placeable;
    placeable.reserve(test.size());
    for (const auto& trip : test) {
        if (context.grid.bbox().contains(trip.origin_lat, trip.origin_lon) &&
            context.grid.bbox().contains(trip.dest_lat, trip.dest_lon)) {
            placeable.push_back(trip);
        }
    }
    if (placeable.empty()) {
        throw DataError("no test trip lies inside the model grid");
    }

    ModelEvaluation result;
    result.kind = kind_of(model);
    result.skipped = test.size() - placeable.size();
    const auto table = geo::build_feature_table(placeable, context.grid, context.timespec);
    result.predictions = predict_table(model, table, threads);
    const auto& p = result.predictions;
    if (predicts_time(result.kind)) {
        result.time = metrics::make_report(p.true_time, p.predicted_time, "time", "s");
    }
    if (predicts_distance(result.kind)) {
        result.distance = metrics::make_report(p.true_distance, p.predicted_distance, "distance", "mi");
    }
    return result;
}

CurveSet make_curves(const Predictions& p, const CurveOptions& options)
{
    CurveSet curves;
    if (!p.predicted_time.empty()) {
        curves.time_by_travel_time =
            metrics::binned_mae_curve(p.true_time, p.predicted_time, p.true_time, options.travel_time_bin_s);
        curves.time_by_distance =
            metrics::binned_mae_curve(p.true_time, p.predicted_time, p.true_distance, options.distance_bin_mi);
        curves.time_by_time_of_day = metrics::binned_mae_curve(p.true_time, p.predicted_time, p.time_bin, 1.0);
    }
    if (!p.predicted_distance.empty()) {
        curves.distance_by_distance = metrics::binned_mae_curve(p.true_distance, p.predicted_distance,
                                                                p.true_distance, options.distance_bin_mi);
    }
    return curves;
}

void write_prediction_dump(std::ostream& out, const Predictions& p)
{
    using metrics::format_number;
    out << "y_true_time,y_pred_time,y_true_dist,y_pred_dist,time_bin,origin_lat_bin,origin_lon_bin,dest_lat_bin,"
           "dest_lon_bin\n";
    const bool has_time = !p.predicted_time.empty();
    const bool has_distance = !p.predicted_distance.empty();
    for (std::size_t i = 0; i < p.true_time.size(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        out << format_number(p.true_time[i]) << ',' << (has_time ? format_number(p.predicted_time[i]) : "") << ','
            << format_number(p.true_distance[i]) << ','
            << (has_distance ? format_number(p.predicted_distance[i]) : "") << ',' << format_number(p.time_bin[i])
            << ',' << format_number(p.features(0, c)) << ',' << format_number(p.features(1, c)) << ','
            << format_number(p.features(2, c)) << ',' << format_number(p.features(3, c)) << '\n';
    }
}

void write_table_header(std::ostream& out)
{
    char line[128];
    std::snprintf(line, sizeof(line), "%-8s %-9s %8s %12s %8s %12s %8s\n", "model", "target", "R2", "MAE", "MRE",
                  "MedAE", "MedRE");
    out << line;
}

void write_table_row(std::ostream& out, ModelKind kind, const metrics::EvalReport& r)
{
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %-9s %8.4f %12.4f %8.4f %12.4f %8.4f\n",
                  std::string(model_tag(kind)).c_str(), r.target.c_str(), r.r2, r.mae, r.mre, r.medae, r.medre);
    out << line;
}

}  // namespace stnn::eval
