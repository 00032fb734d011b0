#include "stnn/synthcity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stnn/error.hpp"

namespace stnn::synth {

namespace {

double bump(double hour, double center, double width)
{
    const double z = (hour - center) / width;
    return std::exp(-0.5 * z * z);
}

double weekday_speed(double hour)
{
    return 17.0 + 3.0 * bump(hour, 3.0, 2.0) - 8.0 * bump(hour, 8.5, 1.2) - 7.0 * bump(hour, 17.75, 1.4) -
           2.0 * bump(hour, 13.0, 2.5);
}

double weekend_speed(double hour)
{
    return 19.0 + 2.0 * bump(hour, 5.0, 2.0) - 4.0 * bump(hour, 14.0, 2.5) - 5.0 * bump(hour, 21.0, 1.8);
}

}  // namespace

void CityConfig::validate() const
{
    bbox.validate();
    timespec.validate();
    if (!(detour_factor >= 1.0)) {
        throw ConfigError("detour factor must be >= 1");
    }
    if (!(cell_size_m > 0.0)) {
        throw ConfigError("city cell size must be positive");
    }
    if (static_cast<std::int64_t>(speed_mph.size()) != timespec.total_bins()) {
        throw ConfigError("speed profile needs one entry per time bin (" + std::to_string(timespec.total_bins()) +
                          "), got " + std::to_string(speed_mph.size()));
    }
    for (const double s : speed_mph) {
        if (!(s > 0.0)) {
            throw ConfigError("all speeds must be positive");
        }
    }
    if (!(delay_per_crossing_s >= 0.0) || !(noise_sigma >= 0.0)) {
        throw ConfigError("delay and noise must be non-negative");
    }
    if (window_days < 1) {
        throw ConfigError("sampling window must cover at least one day");
    }
    if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0)) {
        throw ConfigError("outlier rate must lie in [0, 1]");
    }
}

std::vector<double> default_speed_profile(const geo::TimeSpec& timespec)
{
    timespec.validate();
    const auto per_day = timespec.weekday_bins();
    std::vector<double> profile(static_cast<std::size_t>(timespec.total_bins()));
    for (std::int64_t b = 0; b < per_day; ++b) {
        const double hour = (static_cast<double>(b) + 0.5) * static_cast<double>(timespec.cell_seconds) / 3600.0;
        profile[static_cast<std::size_t>(b)] = weekday_speed(hour);
        profile[static_cast<std::size_t>(b + per_day)] = weekend_speed(hour);
    }
    return profile;
}

CityConfig default_city()
{
    CityConfig city;
    city.speed_mph = default_speed_profile(city.timespec);
    return city;
}

double straight_line_miles(const geo::GridSpec& grid, geo::LatLon a, geo::LatLon b)
{
    const double dy = (b.lat - a.lat) * grid.meters_per_deg_lat();
    const double dx = (b.lon - a.lon) * grid.meters_per_deg_lon();
    return std::sqrt(dx * dx + dy * dy) / kMetersPerMile;
}

namespace {

void check_inside(const CityConfig& city, geo::LatLon p)
{
    // bin_location raises a descriptive OutOfBoundsError.
    static_cast<void>(geo::bin_location(city.grid(), p.lat, p.lon));
}

}  // namespace

double oracle_distance(const CityConfig& city, geo::LatLon origin, geo::LatLon dest)
{
    check_inside(city, origin);
    check_inside(city, dest);
    return city.detour_factor * straight_line_miles(city.grid(), origin, dest);
}

std::int64_t boundary_crossings(const CityConfig& city, geo::LatLon origin, geo::LatLon dest)
{
    const auto grid = city.grid();
    const auto a = geo::bin_location(grid, origin.lat, origin.lon);
    const auto b = geo::bin_location(grid, dest.lat, dest.lon);
    return std::abs(a.lat_idx - b.lat_idx) + std::abs(a.lon_idx - b.lon_idx);
}

double speed_at(const CityConfig& city, std::int64_t pickup_epoch)
{
    const auto bin = geo::bin_time(city.timespec, pickup_epoch);
    return city.speed_mph.at(static_cast<std::size_t>(bin));
}

double oracle_time(const CityConfig& city, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch)
{
    const double miles = oracle_distance(city, origin, dest);
    const double driving = miles / speed_at(city, pickup_epoch) * 3600.0;
    return driving + city.delay_per_crossing_s * static_cast<double>(boundary_crossings(city, origin, dest));
}

double oracle_time(const CityConfig& city, geo::LatLon origin, geo::LatLon dest, std::int64_t pickup_epoch,
                   std::mt19937_64& rng)
{
    const double expected = oracle_time(city, origin, dest, pickup_epoch);
    if (city.noise_sigma == 0.0) {
        return expected;
    }
    std::normal_distribution<double> normal(0.0, city.noise_sigma);
    return expected * std::exp(normal(rng));
}

namespace {

void inject_outlier(trips::TripRecord& trip, const CityConfig& city, int anomaly_class, std::mt19937_64& rng)
{
    switch (anomaly_class) {
        case 0:  // missing pickup coordinates, encoded as zeros
            trip.origin_lat = 0.0;
            trip.origin_lon = 0.0;
            break;
        case 1: {  // dropoff north of both the city and the default filter box
            const double edge = std::max(city.bbox.lat_max, trips::BoundingBox{}.lat_max);
            trip.dest_lat = edge + 0.05 + 0.1 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            break;
        }
        case 2: trip.travel_time = 0.0; break;
        case 3: trip.travel_distance = 0.0; break;
        default: trip.passenger_count = (rng() % 2 == 0) ? 0 : trips::kMaxPassengers + 1; break;
    }
}

}  // namespace

std::vector<trips::TripRecord> sample_trips(const CityConfig& city, std::size_t n, std::uint64_t seed)
{
    city.validate();
    std::mt19937_64 rng(seed);
    std::mt19937_64 outlier_rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
    std::uniform_real_distribution<double> lat(city.bbox.lat_min, city.bbox.lat_max);
    std::uniform_real_distribution<double> lon(city.bbox.lon_min, city.bbox.lon_max);
    std::uniform_int_distribution<std::int64_t> offset(0, city.window_days * geo::kDaySeconds - 1);
    std::uniform_int_distribution<int> passengers(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> anomaly(0, 4);

    std::vector<trips::TripRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        trips::TripRecord trip;
        trip.origin_lat = lat(rng);
        trip.origin_lon = lon(rng);
        trip.dest_lat = lat(rng);
        trip.dest_lon = lon(rng);
        trip.pickup_epoch = city.window_start + offset(rng);
        trip.passenger_count = passengers(rng);
        const geo::LatLon o{trip.origin_lat, trip.origin_lon};
        const geo::LatLon d{trip.dest_lat, trip.dest_lon};
        trip.travel_distance = oracle_distance(city, o, d);
        trip.travel_time = oracle_time(city, o, d, trip.pickup_epoch, rng);

        if (city.outlier_rate > 0.0 && unit(outlier_rng) < city.outlier_rate) {
            inject_outlier(trip, city, anomaly(outlier_rng), outlier_rng);
        }
        out.push_back(trip);
    }
    return out;
}

}  // namespace stnn::synth
