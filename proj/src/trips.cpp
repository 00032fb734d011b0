#include "stnn/trips.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "stnn/binary_io.hpp"
#include "stnn/error.hpp"

namespace stnn::trips {

namespace {

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_double(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<int> parse_int(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

template <typename Int>
std::optional<Int> parse_fixed_digits(std::string_view text)
{
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

std::string format_double(double value)
{
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace

void BoundingBox::validate() const
{
    if (!(lat_min < lat_max) || !(lon_min < lon_max)) {
        throw ConfigError("bounding box needs lat_min < lat_max and lon_min < lon_max, got " + to_string());
    }
}

bool BoundingBox::contains(double lat, double lon) const
{
    return lat >= lat_min && lat < lat_max && lon >= lon_min && lon < lon_max;
}

BoundingBox BoundingBox::parse(std::string_view text)
{
    const auto fields = split_commas(text);
    if (fields.size() != 4) {
        throw ConfigError("bbox must be lat_min,lat_max,lon_min,lon_max: \"" + std::string(text) + "\"");
    }
    std::array<double, 4> values{};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto value = parse_double(fields[i]);
        if (!value) {
            throw ConfigError("bbox component is not a number: \"" + std::string(fields[i]) + "\"");
        }
        values[i] = *value;
    }
    BoundingBox box{values[0], values[1], values[2], values[3]};
    box.validate();
    return box;
}

std::string BoundingBox::to_string() const
{
    return format_double(lat_min) + "," + format_double(lat_max) + "," + format_double(lon_min) + "," +
           format_double(lon_max);
}

std::string_view to_string(RejectionReason reason)
{
    switch (reason) {
        case RejectionReason::MissingCoordinates: return "MissingCoordinates";
        case RejectionReason::OutsideBox: return "OutsideBox";
        case RejectionReason::ZeroTimeNonzeroDistance: return "ZeroTimeNonzeroDistance";
        case RejectionReason::ZeroDistanceNonzeroTime: return "ZeroDistanceNonzeroTime";
        case RejectionReason::BadPassengerCount: return "BadPassengerCount";
        case RejectionReason::UnparsableRow: return "UnparsableRow";
    }
    return "Unknown";
}

// --- timestamps -------------------------------------------------------------

std::optional<std::int64_t> parse_timestamp(std::string_view text)
{
    text = trim(text);
    // YYYY-MM-DD HH:MM:SS
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' || (text[10] != ' ' && text[10] != 'T') ||
        text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    const auto year = parse_fixed_digits<int>(text.substr(0, 4));
    const auto month = parse_fixed_digits<unsigned>(text.substr(5, 2));
    const auto day = parse_fixed_digits<unsigned>(text.substr(8, 2));
    const auto hour = parse_fixed_digits<int>(text.substr(11, 2));
    const auto minute = parse_fixed_digits<int>(text.substr(14, 2));
    const auto second = parse_fixed_digits<int>(text.substr(17, 2));
    if (!year || !month || !day || !hour || !minute || !second) {
        return std::nullopt;
    }
    const std::chrono::year_month_day date{std::chrono::year{*year}, std::chrono::month{*month},
                                           std::chrono::day{*day}};
    if (!date.ok() || *hour > 23 || *minute > 59 || *second > 59) {
        return std::nullopt;
    }
    const auto days = std::chrono::sys_days{date}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + *hour * 3600 + *minute * 60 + *second;
}

std::string format_timestamp(std::int64_t epoch)
{
    auto days = epoch / 86400;
    auto seconds = epoch % 86400;
    if (seconds < 0) {
        seconds += 86400;
        --days;
    }
    const std::chrono::year_month_day date{std::chrono::sys_days{std::chrono::days{days}}};
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(seconds / 3600), static_cast<int>((seconds / 60) % 60),
                  static_cast<int>(seconds % 60));
    return buffer;
}

// --- CSV parsing ------------------------------------------------------------

TripCsvReader::TripCsvReader(std::istream& in, const CsvSchema& schema) : in_(in)
{
    std::string header;
    if (!std::getline(in_, header) || trim(header).empty()) {
        throw ConfigError("trip CSV has no header row");
    }
    const auto names = split_commas(header);
    column_count_ = names.size();

    const std::array<const std::string*, 8> wanted{
        &schema.pickup_datetime,  &schema.trip_time_in_secs, &schema.trip_distance,
        &schema.pickup_longitude, &schema.pickup_latitude,   &schema.dropoff_longitude,
        &schema.dropoff_latitude, &schema.passenger_count,
    };
    for (const auto* name : wanted) {
        const auto it = std::find(names.begin(), names.end(), std::string_view(*name));
        if (it == names.end()) {
            throw ConfigError("trip CSV header is missing required column \"" + *name + "\"");
        }
        columns_.push_back(static_cast<std::size_t>(it - names.begin()));
    }
}

std::optional<ParsedRow> TripCsvReader::next()
{
    std::string line;
    while (std::getline(in_, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ParsedRow row;
        row.row_index = ++row_;
        row.result = RejectionReason::UnparsableRow;

        const auto fields = split_commas(line);
        if (fields.size() < column_count_) {
            return row;
        }
        const auto field = [&](std::size_t k) { return fields[columns_[k]]; };

        const auto epoch = parse_timestamp(field(0));
        const auto time = parse_double(field(1));
        const auto distance = parse_double(field(2));
        const auto origin_lon = parse_double(field(3));
        const auto origin_lat = parse_double(field(4));
        const auto dest_lon = parse_double(field(5));
        const auto dest_lat = parse_double(field(6));
        const auto passengers = parse_int(field(7));
        if (!epoch || !time || !distance || !origin_lon || !origin_lat || !dest_lon || !dest_lat || !passengers) {
            return row;
        }
        row.result = TripRecord{*origin_lat, *origin_lon, *dest_lat, *dest_lon, *epoch, *time, *distance, *passengers};
        return row;
    }
    return std::nullopt;
}

std::vector<ParsedRow> parse_trips(std::istream& in, const CsvSchema& schema)
{
    TripCsvReader reader(in, schema);
    std::vector<ParsedRow> rows;
    while (auto row = reader.next()) {
        rows.push_back(std::move(*row));
    }
    return rows;
}

// --- filters ----------------------------------------------------------------

std::optional<RejectionReason> classify(const TripRecord& trip, const BoundingBox& bbox)
{
    // The TLC data encodes missing coordinates as 0.0.
    const std::array coords{trip.origin_lat, trip.origin_lon, trip.dest_lat, trip.dest_lon};
    for (const double c : coords) {
        if (!std::isfinite(c) || c == 0.0) {
            return RejectionReason::MissingCoordinates;
        }
    }
    if (!bbox.contains(trip.origin_lat, trip.origin_lon) || !bbox.contains(trip.dest_lat, trip.dest_lon)) {
        return RejectionReason::OutsideBox;
    }
    if (!(trip.travel_time > 0.0)) {
        return RejectionReason::ZeroTimeNonzeroDistance;
    }
    if (!(trip.travel_distance > 0.0)) {
        return RejectionReason::ZeroDistanceNonzeroTime;
    }
    if (trip.passenger_count < 1 || trip.passenger_count > kMaxPassengers) {
        return RejectionReason::BadPassengerCount;
    }
    return std::nullopt;
}

FilterResult apply_outlier_filters(std::span<const TripRecord> trips, const BoundingBox& bbox)
{
    FilterResult result;
    result.clean.reserve(trips.size());
    for (const auto& trip : trips) {
        if (const auto reason = classify(trip, bbox)) {
            result.rejected.emplace_back(trip, *reason);
        } else {
            result.clean.push_back(trip);
        }
    }
    return result;
}

TrainTestSplit split_train_test(std::span<const TripRecord> trips, double test_fraction, std::uint64_t seed)
{
    if (trips.empty()) {
        throw DataError("cannot split an empty trip set");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test fraction must lie in (0, 1)");
    }
    const auto n = trips.size();
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < n_test; ++i) {
        in_test[order[i]] = true;
    }
    TrainTestSplit split;
    split.train.reserve(n - n_test);
    split.test.reserve(n_test);
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? split.test : split.train).push_back(trips[i]);
    }
    return split;
}

// --- writers ----------------------------------------------------------------

void write_trips_csv(std::ostream& out, std::span<const TripRecord> trips)
{
    const CsvSchema schema;
    out << schema.pickup_datetime << ',' << schema.passenger_count << ',' << schema.trip_time_in_secs << ','
        << schema.trip_distance << ',' << schema.pickup_longitude << ',' << schema.pickup_latitude << ','
        << schema.dropoff_longitude << ',' << schema.dropoff_latitude << '\n';
    for (const auto& t : trips) {
        out << format_timestamp(t.pickup_epoch) << ',' << t.passenger_count << ',' << format_double(t.travel_time)
            << ',' << format_double(t.travel_distance) << ',' << format_double(t.origin_lon) << ','
            << format_double(t.origin_lat) << ',' << format_double(t.dest_lon) << ',' << format_double(t.dest_lat)
            << '\n';
    }
}

namespace {

constexpr std::string_view kCacheMagic = "STTR";

void write_record(std::ostream& out, const TripRecord& t)
{
    binio::write_f64(out, t.origin_lat);
    binio::write_f64(out, t.origin_lon);
    binio::write_f64(out, t.dest_lat);
    binio::write_f64(out, t.dest_lon);
    binio::write_f64(out, static_cast<double>(t.pickup_epoch));
    binio::write_f64(out, t.travel_time);
    binio::write_f64(out, t.travel_distance);
    binio::write_f64(out, static_cast<double>(t.passenger_count));
}

}  // namespace

void write_trip_cache(std::ostream& out, std::span<const TripRecord> trips)
{
    binio::write_magic(out, kCacheMagic);
    binio::write_uint<std::uint16_t>(out, kTripCacheVersion);
    binio::write_uint<std::uint64_t>(out, trips.size());
    for (const auto& t : trips) {
        write_record(out, t);
    }
}

std::vector<TripRecord> read_trip_cache(std::istream& in)
{
    binio::Reader reader(in, "trip cache");
    reader.expect_magic(kCacheMagic);
    const auto version = reader.read_uint<std::uint16_t>();
    if (version != kTripCacheVersion) {
        throw FormatError("trip cache: unsupported format version " + std::to_string(version));
    }
    const auto count = reader.read_uint<std::uint64_t>();
    std::vector<TripRecord> trips;
    trips.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
    for (std::uint64_t i = 0; i < count; ++i) {
        TripRecord t;
        t.origin_lat = reader.read_f64();
        t.origin_lon = reader.read_f64();
        t.dest_lat = reader.read_f64();
        t.dest_lon = reader.read_f64();
        t.pickup_epoch = static_cast<std::int64_t>(reader.read_f64());
        t.travel_time = reader.read_f64();
        t.travel_distance = reader.read_f64();
        t.passenger_count = static_cast<int>(reader.read_f64());
        trips.push_back(t);
    }
    reader.expect_end();
    return trips;
}

TripCacheWriter::TripCacheWriter(std::ostream& out) : out_(out)
{
    binio::write_magic(out_, kCacheMagic);
    binio::write_uint<std::uint16_t>(out_, kTripCacheVersion);
    count_pos_ = out_.tellp();
    binio::write_uint<std::uint64_t>(out_, 0);
}

void TripCacheWriter::append(const TripRecord& trip)
{
    write_record(out_, trip);
    ++count_;
}

void TripCacheWriter::finish()
{
    if (finished_) {
        return;
    }
    const auto end = out_.tellp();
    out_.seekp(count_pos_);
    binio::write_uint<std::uint64_t>(out_, count_);
    out_.seekp(end);
    out_.flush();
    finished_ = true;
    if (!out_) {
        throw DataError("failed to finalize trip cache");
    }
}

bool is_trip_cache(std::istream& in)
{
    const auto start = in.tellg();
    char magic[4] = {};
    in.read(magic, 4);
    const bool match = in.gcount() == 4 && std::string_view(magic, 4) == kCacheMagic;
    in.clear();
    in.seekg(start);
    return match;
}

}  // namespace stnn::trips
