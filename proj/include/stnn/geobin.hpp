#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stnn/trips.hpp"

namespace stnn::geo {

inline constexpr double kMetersPerDegreeLat = 111320.0;
inline constexpr std::int64_t kDaySeconds = 86400;

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

struct CellIndex {
    std::int64_t lat_idx = 0;
    std::int64_t lon_idx = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Square metric cells over a bounding box, using an equirectangular
// degrees-to-meters conversion anchored at the box's mid latitude.
class GridSpec {
public:
    GridSpec() : GridSpec(trips::BoundingBox{}, 200.0) {}
    GridSpec(const trips::BoundingBox& bbox, double cell_size_m);

    const trips::BoundingBox& bbox() const { return bbox_; }
    double cell_size() const { return cell_size_; }
    double meters_per_deg_lat() const { return kMetersPerDegreeLat; }
    double meters_per_deg_lon() const { return meters_per_deg_lon_; }
    std::int64_t lat_cells() const { return lat_cells_; }
    std::int64_t lon_cells() const { return lon_cells_; }

    friend bool operator==(const GridSpec& a, const GridSpec& b)
    {
        return a.bbox_ == b.bbox_ && a.cell_size_ == b.cell_size_;
    }

private:
    trips::BoundingBox bbox_;
    double cell_size_ = 200.0;
    double meters_per_deg_lon_ = 0.0;
    std::int64_t lat_cells_ = 0;
    std::int64_t lon_cells_ = 0;
};

// Throws OutOfBoundsError naming the offending coordinate.
CellIndex bin_location(const GridSpec& grid, double lat, double lon);

// Lower-left corner of a cell. Throws OutOfBoundsError for indices outside the grid.
LatLon cell_corner(const GridSpec& grid, CellIndex idx);

// Time-of-day cells. Weekend timestamps are shifted by one day so weekday
// bins occupy [0, weekday_bins()) and weekend bins [weekday_bins(), total_bins()).
struct TimeSpec {
    std::int64_t cell_seconds = 600;

    void validate() const;
    std::int64_t weekday_bins() const { return kDaySeconds / cell_seconds; }
    std::int64_t total_bins() const { return 2 * kDaySeconds / cell_seconds; }

    friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

// Saturday or Sunday in the proleptic Gregorian calendar.
bool is_weekend(std::int64_t epoch);
std::int64_t seconds_into_day(std::int64_t epoch);
std::int64_t bin_time(const TimeSpec& spec, std::int64_t epoch);

inline constexpr int kCoordinateFeatures = 4;
inline constexpr int kFeatureCount = 5;

struct FeatureVector {
    double origin_lat_bin = 0.0;
    double origin_lon_bin = 0.0;
    double dest_lat_bin = 0.0;
    double dest_lon_bin = 0.0;
    std::int64_t time_bin = 0;

    // {origin lat, origin lon, dest lat, dest lon, time bin}
    Eigen::Matrix<double, kFeatureCount, 1> values() const;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Targets {
    double distance = 0.0;  // miles
    double time = 0.0;      // seconds
};

FeatureVector featurize_query(const GridSpec& grid, const TimeSpec& timespec, LatLon origin, LatLon dest,
                              std::int64_t pickup_epoch);
std::pair<FeatureVector, Targets> featurize(const trips::TripRecord& trip, const GridSpec& grid,
                                            const TimeSpec& timespec);

// Column-per-sample feature matrix plus the two targets.
struct FeatureTable {
    Eigen::MatrixXd features;  // kFeatureCount x N
    Eigen::VectorXd distance;  // N
    Eigen::VectorXd time;      // N

    Eigen::Index size() const { return features.cols(); }
};

FeatureTable build_feature_table(std::span<const trips::TripRecord> trips, const GridSpec& grid,
                                 const TimeSpec& timespec);

// Per-dimension z-scoring with population standard deviation. Dimensions
// with zero spread keep std = 1.
class Standardizer {
public:
    Standardizer() = default;
    Standardizer(Eigen::VectorXd mean, Eigen::VectorXd stddev);

    static Standardizer identity(Eigen::Index dims);

    Eigen::Index dims() const { return mean_.size(); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& stddev() const { return stddev_; }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& columns) const;
    Eigen::MatrixXd invert(const Eigen::MatrixXd& columns) const;
    double apply(Eigen::Index dim, double value) const { return (value - mean_[dim]) / stddev_[dim]; }
    double invert(Eigen::Index dim, double value) const { return value * stddev_[dim] + mean_[dim]; }

    friend bool operator==(const Standardizer& a, const Standardizer& b)
    {
        return a.mean_ == b.mean_ && a.stddev_ == b.stddev_;
    }

private:
    Eigen::VectorXd mean_;
    Eigen::VectorXd stddev_;
};

// Fits over the columns of `samples`. Throws DataError when there are none.
Standardizer fit_standardizer(const Eigen::MatrixXd& samples);

}  // namespace stnn::geo
