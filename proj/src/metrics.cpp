#include "stnn/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "stnn/error.hpp"

namespace stnn::metrics {

namespace {

void check_pair(std::span<const double> y, std::span<const double> f)
{
    if (y.size() != f.size()) {
        throw DataError("metric inputs differ in length: " + std::to_string(y.size()) + " vs " +
                        std::to_string(f.size()));
    }
    if (y.empty()) {
        throw DataError("metric needs at least one sample");
    }
}

double abs_error_sum(std::span<const double> y, std::span<const double> f)
{
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        total += std::abs(y[i] - f[i]);
    }
    return total;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
double or_nan(Fn&& fn)
{
    try {
        return fn();
    } catch (const DataError&) {
        return kNaN;
    }
}

}  // namespace

double mae(std::span<const double> y, std::span<const double> f)
{
    check_pair(y, f);
    return abs_error_sum(y, f) / static_cast<double>(y.size());
}

double mre(std::span<const double> y, std::span<const double> f)
{
    check_pair(y, f);
    double total = 0.0;
    for (const double v : y) {
        total += v;
    }
    if (!(total > 0.0)) {
        throw DataError("MRE needs a positive sum of targets");
    }
    return abs_error_sum(y, f) / total;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw DataError("median of an empty set");
    }
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double medae(std::span<const double> y, std::span<const double> f)
{
    check_pair(y, f);
    std::vector<double> residuals(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        residuals[i] = std::abs(y[i] - f[i]);
    }
    return median(std::move(residuals));
}

double medre(std::span<const double> y, std::span<const double> f)
{
    check_pair(y, f);
    std::vector<double> relative(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) {
            throw DataError("MedRE needs every target to be positive");
        }
        relative[i] = std::abs(y[i] - f[i]) / y[i];
    }
    return median(std::move(relative));
}

double r2(std::span<const double> y, std::span<const double> f)
{
    check_pair(y, f);
    if (y.size() < 2) {
        throw DataError("R^2 needs at least two samples");
    }
    double mean = 0.0;
    for (const double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - f[i]) * (y[i] - f[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (!(ss_tot > 0.0)) {
        throw DataError("R^2 is undefined for constant targets");
    }
    return 1.0 - ss_res / ss_tot;
}

EvalReport make_report(std::span<const double> y, std::span<const double> f, std::string target, std::string units)
{
    check_pair(y, f);
    EvalReport report;
    report.target = std::move(target);
    report.units = std::move(units);
    report.n = y.size();
    report.mae = mae(y, f);
    report.mre = or_nan([&] { return mre(y, f); });
    report.medae = medae(y, f);
    report.medre = or_nan([&] { return medre(y, f); });
    report.r2 = or_nan([&] { return r2(y, f); });
    return report;
}

CurveSeries binned_mae_curve(std::span<const double> y, std::span<const double> f, std::span<const double> by,
                             double bin_width)
{
    check_pair(y, f);
    if (by.size() != y.size()) {
        throw DataError("curve grouping values differ in length from the targets");
    }
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw DataError("curve bin width must be positive");
    }
    std::vector<std::int64_t> bins(by.size());
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    for (std::size_t i = 0; i < by.size(); ++i) {
        if (!std::isfinite(by[i])) {
            throw DataError("curve grouping value is not finite");
        }
        bins[i] = static_cast<std::int64_t>(std::floor(by[i] / bin_width));
        lo = std::min(lo, bins[i]);
        hi = std::max(hi, bins[i]);
    }
    const auto count = static_cast<std::size_t>(hi - lo + 1);
    CurveSeries curve;
    curve.bin_width = bin_width;
    curve.lower_edges.resize(count);
    curve.counts.assign(count, 0);
    std::vector<double> sums(count, 0.0);
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const auto k = static_cast<std::size_t>(bins[i] - lo);
        sums[k] += std::abs(y[i] - f[i]);
        ++curve.counts[k];
    }
    curve.mae.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        curve.lower_edges[k] = static_cast<double>(lo + static_cast<std::int64_t>(k)) * bin_width;
        curve.mae[k] = curve.counts[k] == 0 ? kNaN : sums[k] / static_cast<double>(curve.counts[k]);
    }
    return curve;
}

std::vector<EcdfPoint> ecdf(std::span<const double> values)
{
    if (values.empty()) {
        throw DataError("ECDF of an empty set");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<EcdfPoint> points(sorted.size());
    // Walk backwards so tied values share the count of their last occurrence.
    std::size_t at_or_below = sorted.size();
    for (std::size_t i = sorted.size(); i-- > 0;) {
        if (i + 1 < sorted.size() && sorted[i] != sorted[i + 1]) {
            at_or_below = i + 1;
        }
        points[i] = {sorted[i], static_cast<double>(at_or_below) / n};
    }
    return points;
}

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void write_report(std::ostream& out, const EvalReport& report)
{
    out << "target: " << report.target << '\n'
        << "units: " << report.units << '\n'
        << "n: " << report.n << '\n'
        << "r2: " << format_number(report.r2) << '\n'
        << "mae: " << format_number(report.mae) << '\n'
        << "mre: " << format_number(report.mre) << '\n'
        << "medae: " << format_number(report.medae) << '\n'
        << "medre: " << format_number(report.medre) << '\n';
}

void write_curve_csv(std::ostream& out, const CurveSeries& curve, const std::string& by_label)
{
    out << by_label << "_lower," << by_label << "_upper,count,mae\n";
    for (std::size_t k = 0; k < curve.counts.size(); ++k) {
        out << format_number(curve.lower_edges[k]) << ',' << format_number(curve.lower_edges[k] + curve.bin_width)
            << ',' << curve.counts[k] << ',' << format_number(curve.mae[k]) << '\n';
    }
}

void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> points)
{
    out << "value,fraction\n";
    for (const auto& p : points) {
        out << format_number(p.value) << ',' << format_number(p.fraction) << '\n';
    }
}

}  // namespace stnn::metrics
