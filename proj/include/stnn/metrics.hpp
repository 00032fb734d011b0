#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace stnn::metrics {

// y is ground truth, f the estimate. All functions throw DataError on
// violated preconditions.
double mae(std::span<const double> y, std::span<const double> f);
double mre(std::span<const double> y, std::span<const double> f);
double medae(std::span<const double> y, std::span<const double> f);
// Median of per-sample |y - f| / y; needs every y > 0.
double medre(std::span<const double> y, std::span<const double> f);
// 1 - SS_res / SS_tot; needs N >= 2 and non-constant y.
double r2(std::span<const double> y, std::span<const double> f);

// Even-length inputs average the two central order statistics.
double median(std::vector<double> values);

struct EvalReport {
    std::string target;  // "time" or "distance"
    std::string units;   // "s" or "mi"
    std::size_t n = 0;
    double mae = 0.0;
    double mre = 0.0;
    double medae = 0.0;
    double medre = 0.0;
    double r2 = 0.0;
};

// All five metrics. A metric whose precondition fails on this data (for
// example medre with a zero target) is reported as NaN rather than thrown.
EvalReport make_report(std::span<const double> y, std::span<const double> f, std::string target, std::string units);

struct CurveSeries {
    double bin_width = 0.0;
    std::vector<double> lower_edges;
    std::vector<double> mae;  // NaN for empty bins
    std::vector<std::size_t> counts;
};

// Groups samples by floor(by / bin_width) over a contiguous range of bins
// starting at min(0, lowest occupied bin). Empty bins are kept.
CurveSeries binned_mae_curve(std::span<const double> y, std::span<const double> f, std::span<const double> by,
                             double bin_width);

struct EcdfPoint {
    double value = 0.0;
    double fraction = 0.0;
};

// One point per sample in sorted order; fraction = #{v <= value} / N.
std::vector<EcdfPoint> ecdf(std::span<const double> values);

// "key: value" lines.
void write_report(std::ostream& out, const EvalReport& report);
void write_curve_csv(std::ostream& out, const CurveSeries& curve, const std::string& by_label);
void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> points);

// Shortest round-trip decimal representation; "nan" for NaN.
std::string format_number(double value);

}  // namespace stnn::metrics
