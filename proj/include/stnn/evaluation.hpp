#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stnn/metrics.hpp"
#include "stnn/model_io.hpp"
#include "stnn/trips.hpp"

namespace stnn::eval {

// Per-sample predictions of one model over a test table. Prediction vectors
// for a target the model does not estimate are empty.
struct Predictions {
    ModelKind kind = ModelKind::Stnn;
    Eigen::MatrixXd features;  // raw kFeatureCount x N (cell corners, time bin)
    std::vector<double> true_time;
    std::vector<double> true_distance;
    std::vector<double> predicted_time;
    std::vector<double> predicted_distance;
    std::vector<double> time_bin;
};

// Predictions are computed in fixed-size column chunks, so the output bits do
// not depend on `threads`.
Predictions predict_table(const AnyModel& model, const geo::FeatureTable& table, unsigned threads = 1);

struct ModelEvaluation {
    ModelKind kind = ModelKind::Stnn;
    std::optional<metrics::EvalReport> time;
    std::optional<metrics::EvalReport> distance;
    std::size_t skipped = 0;  // trips outside the model grid
    Predictions predictions;
};

// Featurizes `test` on the model's grid, predicts, and scores every target
// the model estimates. Trips that cannot be placed on the grid are skipped
// and counted. Throws DataError when nothing is left to score.
ModelEvaluation evaluate(const AnyModel& model, std::span<const trips::TripRecord> test, unsigned threads = 1);

struct CurveOptions {
    double travel_time_bin_s = 300.0;
    double distance_bin_mi = 0.5;
};

struct CurveSet {
    // Time error against actual travel time, actual distance and time bin.
    std::optional<metrics::CurveSeries> time_by_travel_time;
    std::optional<metrics::CurveSeries> time_by_distance;
    std::optional<metrics::CurveSeries> time_by_time_of_day;
    // Distance error against actual distance.
    std::optional<metrics::CurveSeries> distance_by_distance;
};

CurveSet make_curves(const Predictions& predictions, const CurveOptions& options = {});

// Columns: y_true_time, y_pred_time, y_true_dist, y_pred_dist, time_bin,
// origin_lat_bin, origin_lon_bin, dest_lat_bin, dest_lon_bin. Values use the
// shortest round-trip representation; targets a model does not estimate
// are left empty.
void write_prediction_dump(std::ostream& out, const Predictions& predictions);

void write_table_header(std::ostream& out);
void write_table_row(std::ostream& out, ModelKind kind, const metrics::EvalReport& report);

}  // namespace stnn::eval
