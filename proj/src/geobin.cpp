#include "stnn/geobin.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stnn/error.hpp"

namespace stnn::geo {

namespace {

std::int64_t axis_cells(double span_deg, double meters_per_deg, double cell_size)
{
    const auto cells = static_cast<std::int64_t>(std::ceil(span_deg * meters_per_deg / cell_size));
    return std::max<std::int64_t>(cells, 1);
}

double axis_corner(double origin, std::int64_t idx, double meters_per_deg, double cell_size)
{
    return origin + static_cast<double>(idx) * (cell_size / meters_per_deg);
}

// Largest idx whose corner is <= value. Starts from the arithmetic estimate
// and nudges it so that corner/bin round-trips exactly in floating point.
std::int64_t axis_bin(double value, double origin, double meters_per_deg, double cell_size, std::int64_t cells)
{
    auto idx = static_cast<std::int64_t>(std::floor((value - origin) * meters_per_deg / cell_size));
    idx = std::clamp<std::int64_t>(idx, 0, cells - 1);
    while (idx + 1 < cells && axis_corner(origin, idx + 1, meters_per_deg, cell_size) <= value) {
        ++idx;
    }
    while (idx > 0 && axis_corner(origin, idx, meters_per_deg, cell_size) > value) {
        --idx;
    }
    return idx;
}

[[noreturn]] void throw_outside(const char* axis, double value, double lo, double hi)
{
    std::ostringstream message;
    message.precision(10);
    message << axis << ' ' << value << " is outside the grid [" << lo << ", " << hi << ')';
    throw OutOfBoundsError(message.str());
}

}  // namespace

GridSpec::GridSpec(const trips::BoundingBox& bbox, double cell_size_m) : bbox_(bbox), cell_size_(cell_size_m)
{
    bbox_.validate();
    if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
        throw ConfigError("cell size must be a positive number of meters");
    }
    const double mid_lat = 0.5 * (bbox_.lat_min + bbox_.lat_max);
    meters_per_deg_lon_ = kMetersPerDegreeLat * std::cos(mid_lat * std::numbers::pi / 180.0);
    lat_cells_ = axis_cells(bbox_.lat_max - bbox_.lat_min, kMetersPerDegreeLat, cell_size_);
    lon_cells_ = axis_cells(bbox_.lon_max - bbox_.lon_min, meters_per_deg_lon_, cell_size_);
}

CellIndex bin_location(const GridSpec& grid, double lat, double lon)
{
    const auto& box = grid.bbox();
    if (!(lat >= box.lat_min && lat < box.lat_max)) {
        throw_outside("latitude", lat, box.lat_min, box.lat_max);
    }
    if (!(lon >= box.lon_min && lon < box.lon_max)) {
        throw_outside("longitude", lon, box.lon_min, box.lon_max);
    }
    return {
        axis_bin(lat, box.lat_min, grid.meters_per_deg_lat(), grid.cell_size(), grid.lat_cells()),
        axis_bin(lon, box.lon_min, grid.meters_per_deg_lon(), grid.cell_size(), grid.lon_cells()),
    };
}

LatLon cell_corner(const GridSpec& grid, CellIndex idx)
{
    if (idx.lat_idx < 0 || idx.lat_idx >= grid.lat_cells() || idx.lon_idx < 0 || idx.lon_idx >= grid.lon_cells()) {
        throw OutOfBoundsError("cell (" + std::to_string(idx.lat_idx) + ", " + std::to_string(idx.lon_idx) +
                               ") is outside a " + std::to_string(grid.lat_cells()) + " x " +
                               std::to_string(grid.lon_cells()) + " grid");
    }
    const auto& box = grid.bbox();
    return {
        axis_corner(box.lat_min, idx.lat_idx, grid.meters_per_deg_lat(), grid.cell_size()),
        axis_corner(box.lon_min, idx.lon_idx, grid.meters_per_deg_lon(), grid.cell_size()),
    };
}

// --- time -------------------------------------------------------------------

void TimeSpec::validate() const
{
    if (cell_seconds <= 0 || kDaySeconds % cell_seconds != 0) {
        throw ConfigError("time cell must be a positive divisor of 86400 seconds, got " +
                          std::to_string(cell_seconds));
    }
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    auto q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

}  // namespace

bool is_weekend(std::int64_t epoch)
{
    const std::chrono::sys_days day{std::chrono::days{floor_div(epoch, kDaySeconds)}};
    const std::chrono::weekday wd{day};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::int64_t seconds_into_day(std::int64_t epoch)
{
    return epoch - floor_div(epoch, kDaySeconds) * kDaySeconds;
}

std::int64_t bin_time(const TimeSpec& spec, std::int64_t epoch)
{
    spec.validate();
    const auto t = seconds_into_day(epoch) + (is_weekend(epoch) ? kDaySeconds : 0);
    return t / spec.cell_seconds;
}

// --- features ---------------------------------------------------------------

Eigen::Matrix<double, kFeatureCount, 1> FeatureVector::values() const
{
    Eigen::Matrix<double, kFeatureCount, 1> v;
    v << origin_lat_bin, origin_lon_bin, dest_lat_bin, dest_lon_bin, static_cast<double>(time_bin);
    return v;
}

FeatureVector featurize_query(const GridSpec& grid, const TimeSpec& timespec, LatLon origin, LatLon dest,
                              std::int64_t pickup_epoch)
{
    const auto o = cell_corner(grid, bin_location(grid, origin.lat, origin.lon));
    const auto d = cell_corner(grid, bin_location(grid, dest.lat, dest.lon));
    return {o.lat, o.lon, d.lat, d.lon, bin_time(timespec, pickup_epoch)};
}

std::pair<FeatureVector, Targets> featurize(const trips::TripRecord& trip, const GridSpec& grid,
                                            const TimeSpec& timespec)
{
    return {
        featurize_query(grid, timespec, {trip.origin_lat, trip.origin_lon}, {trip.dest_lat, trip.dest_lon},
                        trip.pickup_epoch),
        {trip.travel_distance, trip.travel_time},
    };
}

FeatureTable build_feature_table(std::span<const trips::TripRecord> trips, const GridSpec& grid,
                                 const TimeSpec& timespec)
{
    const auto n = static_cast<Eigen::Index>(trips.size());
    FeatureTable table{Eigen::MatrixXd(kFeatureCount, n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [fv, targets] = featurize(trips[static_cast<std::size_t>(i)], grid, timespec);
        table.features.col(i) = fv.values();
        table.distance[i] = targets.distance;
        table.time[i] = targets.time;
    }
    return table;
}

// --- standardization ----------------------------------------------------------

Standardizer::Standardizer(Eigen::VectorXd mean, Eigen::VectorXd stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev))
{
    if (mean_.size() != stddev_.size()) {
        throw ShapeError("standardizer mean and std lengths differ");
    }
    for (Eigen::Index i = 0; i < stddev_.size(); ++i) {
        if (!(stddev_[i] > 0.0) || !std::isfinite(stddev_[i]) || !std::isfinite(mean_[i])) {
            throw ConfigError("standardizer needs finite means and positive standard deviations");
        }
    }
}

Standardizer Standardizer::identity(Eigen::Index dims)
{
    return {Eigen::VectorXd::Zero(dims), Eigen::VectorXd::Ones(dims)};
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& columns) const
{
    if (columns.rows() != dims()) {
        throw ShapeError("standardizer expects " + std::to_string(dims()) + " rows, got " +
                         std::to_string(columns.rows()));
    }
    return (columns.colwise() - mean_).array().colwise() / stddev_.array();
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& columns) const
{
    if (columns.rows() != dims()) {
        throw ShapeError("standardizer expects " + std::to_string(dims()) + " rows, got " +
                         std::to_string(columns.rows()));
    }
    return (columns.array().colwise() * stddev_.array()).matrix().colwise() + mean_;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& samples)
{
    if (samples.cols() == 0) {
        throw DataError("cannot fit a standardizer on an empty set");
    }
    const Eigen::VectorXd mean = samples.rowwise().mean();
    const Eigen::MatrixXd centered = samples.colwise() - mean;
    Eigen::VectorXd stddev =
        (centered.array().square().rowwise().sum() / static_cast<double>(samples.cols())).sqrt().matrix();
    for (Eigen::Index i = 0; i < stddev.size(); ++i) {
        if (!(stddev[i] > 0.0)) {
            stddev[i] = 1.0;
        }
    }
    return {mean, stddev};
}

}  // namespace stnn::geo
