#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stnn::trips {

// Geographic box in degrees. Membership is half-open: [min, max).
struct BoundingBox {
    double lat_min = 40.4961;
    double lat_max = 40.9156;
    double lon_min = -74.2556;
    double lon_max = -73.7004;

    // Throws ConfigError unless min < max on both axes.
    void validate() const;
    bool contains(double lat, double lon) const;

    // "lat_min,lat_max,lon_min,lon_max"
    static BoundingBox parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// One taxi trip. pickup_epoch is naive local time counted as seconds since
// 1970-01-01 00:00:00 with no timezone applied.
struct TripRecord {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double dest_lat = 0.0;
    double dest_lon = 0.0;
    std::int64_t pickup_epoch = 0;
    double travel_time = 0.0;      // seconds
    double travel_distance = 0.0;  // miles
    int passenger_count = 1;

    friend bool operator==(const TripRecord&, const TripRecord&) = default;
};

// Filters run in declaration order; the first match is the reported reason.
enum class RejectionReason : std::uint8_t {
    MissingCoordinates,
    OutsideBox,
    ZeroTimeNonzeroDistance,
    ZeroDistanceNonzeroTime,
    BadPassengerCount,
    UnparsableRow,
};

std::string_view to_string(RejectionReason reason);

inline constexpr int kMaxPassengers = 7;

// Maps logical trip fields to CSV column names. Defaults follow the 2013
// TLC trip_data layout.
struct CsvSchema {
    std::string pickup_datetime = "pickup_datetime";
    std::string trip_time_in_secs = "trip_time_in_secs";
    std::string trip_distance = "trip_distance";
    std::string pickup_longitude = "pickup_longitude";
    std::string pickup_latitude = "pickup_latitude";
    std::string dropoff_longitude = "dropoff_longitude";
    std::string dropoff_latitude = "dropoff_latitude";
    std::string passenger_count = "passenger_count";
};

struct ParsedRow {
    std::size_t row_index = 0;  // 1-based, header excluded
    std::variant<TripRecord, RejectionReason> result;

    bool ok() const { return std::holds_alternative<TripRecord>(result); }
};

// Streaming CSV reader. The header is read and validated on construction,
// so schema problems surface before any data row is touched.
class TripCsvReader {
public:
    TripCsvReader(std::istream& in, const CsvSchema& schema = {});

    // Next data row, or nullopt at end of input. Bad rows come back as
    // RejectionReason::UnparsableRow, never as exceptions.
    std::optional<ParsedRow> next();

private:
    std::istream& in_;
    std::size_t row_ = 0;
    std::size_t column_count_ = 0;
    // Column positions in CsvSchema field order.
    std::vector<std::size_t> columns_;
};

std::vector<ParsedRow> parse_trips(std::istream& in, const CsvSchema& schema = {});

// First failing filter for a parsed trip, or nullopt when the trip is clean.
std::optional<RejectionReason> classify(const TripRecord& trip, const BoundingBox& bbox);

struct FilterResult {
    std::vector<TripRecord> clean;
    std::vector<std::pair<TripRecord, RejectionReason>> rejected;
};

FilterResult apply_outlier_filters(std::span<const TripRecord> trips, const BoundingBox& bbox);

struct TrainTestSplit {
    std::vector<TripRecord> train;
    std::vector<TripRecord> test;
};

// |test| = round(test_fraction * N). Both halves keep input order.
TrainTestSplit split_train_test(std::span<const TripRecord> trips, double test_fraction, std::uint64_t seed);

// "YYYY-MM-DD HH:MM:SS" <-> naive epoch seconds. parse returns nullopt on
// any malformed or out-of-range component.
std::optional<std::int64_t> parse_timestamp(std::string_view text);
std::string format_timestamp(std::int64_t epoch);

// Writes the CsvSchema default header followed by one row per trip.
void write_trips_csv(std::ostream& out, std::span<const TripRecord> trips);

// Binary trip cache: "STTR", u16 version, u64 count, then one record of
// eight little-endian f64 per trip.
inline constexpr std::uint16_t kTripCacheVersion = 1;

void write_trip_cache(std::ostream& out, std::span<const TripRecord> trips);
std::vector<TripRecord> read_trip_cache(std::istream& in);

// Appends records to a seekable stream and patches the count on finish().
class TripCacheWriter {
public:
    explicit TripCacheWriter(std::ostream& out);
    void append(const TripRecord& trip);
    void finish();
    std::uint64_t count() const { return count_; }

private:
    std::ostream& out_;
    std::streampos count_pos_;
    std::uint64_t count_ = 0;
    bool finished_ = false;
};

// True when the stream starts with the trip cache magic. Does not consume.
bool is_trip_cache(std::istream& in);

}  // namespace stnn::trips
