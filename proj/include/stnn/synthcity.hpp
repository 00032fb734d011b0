#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stnn/geobin.hpp"
#include "stnn/trips.hpp"

namespace stnn::synth {

inline constexpr double kMetersPerMile = 1609.344;
// 2013-03-04 00:00:00, a Monday.
inline constexpr std::int64_t kDefaultWindowStart = 1362355200;

// A toy city whose travel distance and time are known in closed form.
struct CityConfig {
    // Central Manhattan-sized box, inside the default NYC filter box.
    trips::BoundingBox bbox{40.70, 40.82, -74.02, -73.92};
    double detour_factor = 1.3;
    // Grid used to count cell-boundary crossings (traffic-light delays).
    double cell_size_m = 200.0;
    geo::TimeSpec timespec{};
    // Mean speed per time bin of `timespec`, weekday bins then weekend bins.
    std::vector<double> speed_mph;
    double delay_per_crossing_s = 3.0;
    // Multiplicative lognormal noise on time; 0 makes time deterministic.
    double noise_sigma = 0.05;
    std::int64_t window_start = kDefaultWindowStart;
    std::int64_t window_days = 14;
    // Fraction of trips replaced by one anomaly class each.
    double outlier_rate = 0.0;

    void validate() const;
    geo::GridSpec grid() const { return {bbox, cell_size_m}; }
};

// Weekday profile with morning and evening rush-hour dips; weekend profile
// with a midday and late-evening slowdown.
std::vector<double> default_speed_profile(const geo::TimeSpec& timespec);

CityConfig default_city();

// Equirectangular straight-line miles using the grid's conversion constants.
double straight_line_miles(const geo::GridSpec& grid, geo::LatLon a, geo::LatLon b);

double oracle_distance(const CityConfig& city, geo::LatLon origin, geo::LatLon dest);

// Cell boundaries crossed on the lat-then-lon L-shaped path.
std::int64_t boundary_crossings(const CityConfig& city, geo::LatLon origin, geo::LatLon dest);

double speed_at(const CityConfig& city, std::int64_t pickup_epoch);

// Draws from `rng` only when noise_sigma > 0.
double oracle_time(const CityConfig& city, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch,
                   std::mt19937_64& rng);

// Noise-free expected travel time.
double oracle_time(const CityConfig& city, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch);

// Uniform endpoints in the box and uniform pickup times over the window.
// Outlier injection uses its own random stream, so the underlying trips are
// the same with or without it.
std::vector<trips::TripRecord> sample_trips(const CityConfig& city, std::size_t n, std::uint64_t seed);

}  // namespace stnn::synth
