#include "stnn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "stnn/baselines.hpp"
#include "stnn/error.hpp"
#include "stnn/evaluation.hpp"
#include "stnn/geobin.hpp"
#include "stnn/joint_model.hpp"
#include "stnn/model_io.hpp"
#include "stnn/synthcity.hpp"
#include "stnn/trips.hpp"

namespace stnn::cli {

namespace fs = std::filesystem;

namespace {

// Raised while resolving options; maps to the usage exit code.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every tunable, resolved from defaults, an optional config file and the
// command line before any stage runs.
struct RunConfig {
    std::uint64_t seed = 0;
    std::string bbox;
    std::string preset = "default";
    double cell_size_m = 200.0;
    std::int64_t time_cell_s = 600;
    double test_fraction = 0.2;
    std::size_t epochs = 20;
    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    std::string dist_hidden = "128,64,32";
    std::string time_hidden = "128,64,32";
    std::string activation = "relu";
    bool no_standardize = false;
    bool raw_loss = false;
    bool detach_time_path = false;
    double ridge = 1e-8;
    unsigned threads = 0;

    // subcommand options
    std::string data;
    std::string out;
    std::string out_dir = ".";
    std::string rejects;
    std::string model = "stnn";
    std::vector<std::string> model_files;
    bool no_filter = false;
    double curve_time_bin_s = 300.0;
    double curve_distance_bin_mi = 0.5;
    std::string origin;
    std::string dest;
    std::string time;
    std::size_t trips = 0;
    double noise = 0.05;
    double outlier_rate = 0.0;
    double delay_s = 3.0;
    double detour = 1.3;
    std::string city_bbox;
};

struct Resolved {
    trips::BoundingBox bbox;
    geo::GridSpec grid;
    geo::TimeSpec timespec;
    TrainConfig train;
    unsigned threads = 1;
};

std::vector<int> parse_widths(const std::string& text, const char* flag)
{
    std::vector<int> widths;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int w = std::stoi(item, &used);
            if (used != item.size() || w <= 0) throw std::invalid_argument(item);
            widths.push_back(w);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + " must be a comma-separated list of positive integers, got \"" +
                             text + "\"");
        }
    }
    if (widths.empty()) {
        throw UsageError(std::string(flag) + " must list at least one hidden width");
    }
    return widths;
}

geo::LatLon parse_point(const std::string& text, const char* flag)
{
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        std::size_t used_lat = 0;
        std::size_t used_lon = 0;
        const auto lat_text = text.substr(0, comma);
        const auto lon_text = text.substr(comma + 1);
        const double lat = std::stod(lat_text, &used_lat);
        const double lon = std::stod(lon_text, &used_lon);
        if (used_lat != lat_text.size() || used_lon != lon_text.size()) throw std::invalid_argument(text);
        return {lat, lon};
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + " must be \"lat,lon\", got \"" + text + "\"");
    }
}

unsigned resolve_threads(unsigned requested)
{
    unsigned threads = requested;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char* cap = std::getenv("STNN_THREADS")) {
        try {
            const auto limit = std::stoul(cap);
            if (limit > 0) threads = std::min<unsigned>(threads, static_cast<unsigned>(limit));
        } catch (const std::exception&) {
            throw UsageError(std::string("STNN_THREADS must be a positive integer, got \"") + cap + "\"");
        }
    }
    return threads;
}

Resolved resolve(const RunConfig& cfg, const CLI::App& app)
{
    Resolved r;
    const bool manhattan = cfg.preset == "manhattan";
    if (!manhattan && cfg.preset != "default") {
        throw UsageError("--preset must be \"default\" or \"manhattan\"");
    }
    if (manhattan && cfg.bbox.empty()) {
        throw UsageError("--preset manhattan needs a Manhattan --bbox lat_min,lat_max,lon_min,lon_max");
    }
    try {
        r.bbox = cfg.bbox.empty() ? trips::BoundingBox{} : trips::BoundingBox::parse(cfg.bbox);
        double cell = cfg.cell_size_m;
        std::int64_t time_cell = cfg.time_cell_s;
        if (manhattan) {
            if (app.count("--cell-size-m") == 0) cell = 50.0;
            if (app.count("--time-cell-s") == 0) time_cell = 3600;
        }
        r.grid = geo::GridSpec(r.bbox, cell);
        r.timespec = geo::TimeSpec{time_cell};
        r.timespec.validate();
        r.train.epochs = cfg.epochs;
        r.train.batch_size = cfg.batch_size;
        r.train.learning_rate = cfg.learning_rate;
        r.train.seed = cfg.seed;
        r.train.dist_hidden = parse_widths(cfg.dist_hidden, "--dist-hidden");
        r.train.time_hidden = parse_widths(cfg.time_hidden, "--time-hidden");
        r.train.hidden_activation = nn::parse_activation(cfg.activation);
        r.train.detach_time_path = cfg.detach_time_path;
        r.train.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw UsageError("--test-fraction must lie in (0, 1)");
    }
    r.threads = resolve_threads(cfg.threads);
    return r;
}

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void echo_config(const CLI::App& app, const fs::path& dir, const std::string& command)
{
    auto out = open_output(dir / (command + "_config.txt"));
    out << app.config_to_str(true, false);
}

struct LoadedTrips {
    std::vector<trips::TripRecord> trips;
    std::size_t unparsable = 0;
};

LoadedTrips load_trips(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open data file " + path);
    }
    LoadedTrips loaded;
    if (trips::is_trip_cache(in)) {
        loaded.trips = trips::read_trip_cache(in);
        return loaded;
    }
    trips::TripCsvReader reader(in);
    while (auto row = reader.next()) {
        if (row->ok()) {
            loaded.trips.push_back(std::get<trips::TripRecord>(row->result));
        } else {
            ++loaded.unparsable;
        }
    }
    return loaded;
}

std::string lower(std::string_view text)
{
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<ModelKind> parse_kinds(const std::string& text)
{
    if (lower(text) == "all") {
        return {ModelKind::Lrt, ModelKind::Lrd, ModelKind::TimeNn, ModelKind::DistNn, ModelKind::Stnn};
    }
    std::vector<ModelKind> kinds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            kinds.push_back(parse_model_kind(item));
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    if (kinds.empty()) {
        throw UsageError("--model needs at least one model kind");
    }
    return kinds;
}

// --- subcommands ----------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg, const Resolved& r, const CLI::App& app, std::ostream& out)
{
    std::ifstream in(cfg.data, std::ios::binary);
    if (!in) {
        throw DataError("cannot open data file " + cfg.data);
    }
    trips::TripCsvReader reader(in);
    auto cache_stream = open_output(cfg.out, std::ios::out | std::ios::binary);
    trips::TripCacheWriter writer(cache_stream);
    std::optional<std::ofstream> rejects;
    if (!cfg.rejects.empty()) {
        rejects = open_output(cfg.rejects);
        *rejects << "row,reason\n";
    }
    std::array<std::size_t, 6> counts{};
    std::size_t total = 0;
    while (auto row = reader.next()) {
        ++total;
        std::optional<trips::RejectionReason> reason;
        if (row->ok()) {
            const auto& trip = std::get<trips::TripRecord>(row->result);
            reason = trips::classify(trip, r.bbox);
            if (!reason) {
                writer.append(trip);
                continue;
            }
        } else {
            reason = std::get<trips::RejectionReason>(row->result);
        }
        ++counts[static_cast<std::size_t>(*reason)];
        if (rejects) {
            *rejects << row->row_index << ',' << trips::to_string(*reason) << '\n';
        }
    }
    writer.finish();

    const fs::path out_dir = fs::path(cfg.out).parent_path();
    auto summary = open_output(out_dir / "ingest_summary.txt");
    std::ostringstream text;
    text << "rows: " << total << '\n' << "clean: " << writer.count() << '\n';
    for (std::size_t i = 0; i < counts.size(); ++i) {
        text << "rejected_" << trips::to_string(static_cast<trips::RejectionReason>(i)) << ": " << counts[i] << '\n';
    }
    summary << text.str();
    out << text.str();
    echo_config(app, out_dir, "ingest");
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const CLI::App& app, std::ostream& out)
{
    auto city = synth::default_city();
    try {
        if (!cfg.city_bbox.empty()) city.bbox = trips::BoundingBox::parse(cfg.city_bbox);
        city.noise_sigma = cfg.noise;
        city.outlier_rate = cfg.outlier_rate;
        city.delay_per_crossing_s = cfg.delay_s;
        city.detour_factor = cfg.detour;
        city.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (cfg.trips < 1) {
        throw UsageError("--trips must be at least 1");
    }
    const auto sampled = synth::sample_trips(city, cfg.trips, cfg.seed);
    const fs::path path(cfg.out);
    if (path.extension() == ".sttr") {
        auto file = open_output(path, std::ios::out | std::ios::binary);
        trips::write_trip_cache(file, sampled);
    } else {
        auto file = open_output(path);
        trips::write_trips_csv(file, sampled);
    }
    echo_config(app, path.parent_path(), "simulate");
    out << "wrote " << sampled.size() << " synthetic trips to " << cfg.out << '\n';
    return kExitOk;
}

int cmd_train(const RunConfig& cfg, const Resolved& r, const CLI::App& app, std::ostream& out)
{
    const auto kinds = parse_kinds(cfg.model);
    if (!cfg.model_files.empty() && (kinds.size() != 1 || cfg.model_files.size() != 1)) {
        throw UsageError("--model-file can only be used when training a single model kind");
    }
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    const auto loaded = load_trips(cfg.data);
    const auto filtered = trips::apply_outlier_filters(loaded.trips, r.bbox);
    if (filtered.clean.size() < 2) {
        throw DataError("need at least two clean trips to train, found " + std::to_string(filtered.clean.size()));
    }
    const auto split = trips::split_train_test(filtered.clean, cfg.test_fraction, cfg.seed);
    {
        auto test_file = open_output(out_dir / "test.csv");
        trips::write_trips_csv(test_file, split.test);
    }
    out << "trips: " << loaded.trips.size() + loaded.unparsable << " read, " << filtered.clean.size() << " clean, "
        << split.train.size() << " train, " << split.test.size() << " held out\n";

    const auto table = geo::build_feature_table(split.train, r.grid, r.timespec);
    const auto context = make_context(r.grid, r.timespec, table, !cfg.no_standardize, !cfg.raw_loss);

    for (const auto kind : kinds) {
        const auto tag = lower(model_tag(kind));
        const fs::path model_path = cfg.model_files.empty() ? out_dir / (tag + ".model") : fs::path(cfg.model_files[0]);
        auto history = open_output(out_dir / (tag + "_loss_history.csv"));
        AnyModel model;
        if (kind == ModelKind::Stnn) {
            auto result = train_joint(init_stnn(context, r.train), table, r.train);
            history << "epoch,joint,time,distance\n";
            for (std::size_t e = 0; e < result.history.size(); ++e) {
                const auto& h = result.history[e];
                history << e + 1 << ',' << metrics::format_number(h.joint) << ',' << metrics::format_number(h.time)
                        << ',' << metrics::format_number(h.distance) << '\n';
            }
            model = std::move(result.model);
        } else if (kind == ModelKind::TimeNn || kind == ModelKind::DistNn) {
            auto result = kind == ModelKind::TimeNn ? baselines::train_timenn(context, table, r.train)
                                                    : baselines::train_distnn(context, table, r.train);
            history << "epoch,loss\n";
            for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
                history << e + 1 << ',' << metrics::format_number(result.loss_history[e]) << '\n';
            }
            model = std::move(result.model);
        } else {
            auto linear = kind == ModelKind::Lrt ? baselines::train_lrt(context, table, cfg.ridge)
                                                 : baselines::train_lrd(context, table, cfg.ridge);
            const Eigen::VectorXd& y = kind == ModelKind::Lrt ? table.time : table.distance;
            const auto fitted = baselines::predict_baseline(linear, context.standardized_features(table));
            history << "epoch,loss\n"
                    << 0 << ','
                    << metrics::format_number(nn::mse_loss(y.transpose(), fitted)) << '\n';
            model = std::move(linear);
        }
        save_model_file(model_path, model);
        out << "trained " << model_tag(kind) << " -> " << model_path.string() << '\n';
    }
    echo_config(app, out_dir, "train");
    return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const Resolved& r, const CLI::App& app, std::ostream& out)
{
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const auto loaded = load_trips(cfg.data);
    if (loaded.trips.empty()) {
        throw DataError("no parsable trips in " + cfg.data);
    }
    eval::write_table_header(out);
    bool wrote_ecdf = false;
    for (const auto& file : cfg.model_files) {
        const auto model = load_model_file(file);
        const auto& context = context_of(model);
        const auto test =
            cfg.no_filter ? loaded.trips : trips::apply_outlier_filters(loaded.trips, context.grid.bbox()).clean;
        if (test.empty()) {
            throw DataError("no test trip survives the outlier filters for " + file);
        }
        const auto evaluation = eval::evaluate(model, test, r.threads);
        const auto stem = fs::path(file).stem().string();

        auto report = open_output(out_dir / (stem + "_report.txt"));
        report << "model: " << model_tag(evaluation.kind) << '\n'
               << "model_file: " << fs::path(file).filename().string() << '\n'
               << "skipped_outside_grid: " << evaluation.skipped << '\n';
        for (const auto* rep : {&evaluation.time, &evaluation.distance}) {
            if (*rep) {
                report << '\n';
                metrics::write_report(report, **rep);
                eval::write_table_row(out, evaluation.kind, **rep);
            }
        }
        auto dump = open_output(out_dir / (stem + "_predictions.csv"));
        eval::write_prediction_dump(dump, evaluation.predictions);

        const auto curves =
            eval::make_curves(evaluation.predictions, {cfg.curve_time_bin_s, cfg.curve_distance_bin_mi});
        const auto write_curve = [&](const std::optional<metrics::CurveSeries>& c, const std::string& name,
                                     const std::string& label) {
            if (c) {
                auto f = open_output(out_dir / (stem + "_curve_" + name + ".csv"));
                metrics::write_curve_csv(f, *c, label);
            }
        };
        write_curve(curves.time_by_travel_time, "time_by_travel_time", "travel_time_s");
        write_curve(curves.time_by_distance, "time_by_distance", "distance_mi");
        write_curve(curves.time_by_time_of_day, "time_by_time_of_day", "time_bin");
        write_curve(curves.distance_by_distance, "distance_by_distance", "distance_mi");

        if (!wrote_ecdf) {
            auto ft = open_output(out_dir / "ecdf_time.csv");
            metrics::write_ecdf_csv(ft, metrics::ecdf(evaluation.predictions.true_time));
            auto fd = open_output(out_dir / "ecdf_distance.csv");
            metrics::write_ecdf_csv(fd, metrics::ecdf(evaluation.predictions.true_distance));
            wrote_ecdf = true;
        }
    }
    echo_config(app, out_dir, "eval");
    return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto origin = parse_point(cfg.origin, "--origin");
    const auto dest = parse_point(cfg.dest, "--dest");
    const auto epoch = trips::parse_timestamp(cfg.time);
    if (!epoch) {
        throw UsageError("--time must be \"YYYY-MM-DD HH:MM:SS\", got \"" + cfg.time + "\"");
    }
    const auto model = load_model_file(cfg.model_files.front());
    const auto& context = context_of(model);
    const auto fv = geo::featurize_query(context.grid, context.timespec, origin, dest, *epoch);

    geo::FeatureTable table{fv.values(), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
    const auto predictions = eval::predict_table(model, table, 1);

    const auto show = [&](const char* label, double value) {
        if (value < 0.0) {
            err << "warning: " << label << " prediction " << value << " is negative; showing 0\n";
            value = 0.0;
        }
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%s=%.4f", label, value);
        return std::string(buffer);
    };
    std::vector<std::string> fields;
    if (!predictions.predicted_distance.empty()) fields.push_back(show("distance_mi", predictions.predicted_distance[0]));
    if (!predictions.predicted_time.empty()) fields.push_back(show("time_s", predictions.predicted_time[0]));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? " " : "") << fields[i];
    }
    out << '\n';
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Joint taxi travel distance and time estimation", "stnn"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value config file");
    RunConfig cfg;

    app.add_option("--seed", cfg.seed, "seed for splitting, initialization, shuffling and simulation")
        ->capture_default_str();
    app.add_option("--bbox", cfg.bbox, "filter/grid box lat_min,lat_max,lon_min,lon_max (default NYC)");
    app.add_option("--preset", cfg.preset, "default | manhattan (50 m cells, 3600 s time cells)")
        ->capture_default_str();
    app.add_option("--cell-size-m", cfg.cell_size_m, "square cell size in meters")->capture_default_str();
    app.add_option("--time-cell-s", cfg.time_cell_s, "time cell length in seconds")->capture_default_str();
    app.add_option("--test-fraction", cfg.test_fraction, "held-out fraction")->capture_default_str();
    app.add_option("--epochs", cfg.epochs)->capture_default_str();
    app.add_option("--batch-size", cfg.batch_size)->capture_default_str();
    app.add_option("--lr", cfg.learning_rate, "SGD learning rate")->capture_default_str();
    app.add_option("--dist-hidden", cfg.dist_hidden, "distance module hidden widths")->capture_default_str();
    app.add_option("--time-hidden", cfg.time_hidden, "time module hidden widths")->capture_default_str();
    app.add_option("--activation", cfg.activation, "relu | tanh")->capture_default_str();
    app.add_flag("--no-standardize", cfg.no_standardize, "feed binned coordinates unscaled");
    app.add_flag("--raw-loss", cfg.raw_loss, "apply the joint loss to raw miles/seconds");
    app.add_flag("--detach-time-path", cfg.detach_time_path,
                 "keep the time loss out of the distance module (ablation)");
    app.add_option("--ridge", cfg.ridge, "ridge epsilon for the linear baselines")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker cap (0 = all cores; STNN_THREADS also caps)")
        ->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "parse and filter a trip CSV into a binary trip cache");
    ingest->add_option("--data", cfg.data, "input CSV")->required();
    ingest->add_option("--out", cfg.out, "output trip cache (.sttr)")->required();
    ingest->add_option("--rejects", cfg.rejects, "optional CSV listing rejected rows");

    auto* simulate = app.add_subcommand("simulate", "write synthetic-city trips");
    simulate->add_option("--trips", cfg.trips, "number of trips")->required();
    simulate->add_option("--out", cfg.out, "output CSV (or .sttr cache)")->required();
    simulate->add_option("--noise", cfg.noise, "lognormal sigma on travel time")->capture_default_str();
    simulate->add_option("--outlier-rate", cfg.outlier_rate, "fraction of anomalous trips")->capture_default_str();
    simulate->add_option("--delay", cfg.delay_s, "seconds per crossed cell boundary")->capture_default_str();
    simulate->add_option("--detour", cfg.detour, "street/straight-line distance ratio")->capture_default_str();
    simulate->add_option("--city-bbox", cfg.city_bbox, "city box lat_min,lat_max,lon_min,lon_max");

    auto* train = app.add_subcommand("train", "train one or more models");
    train->add_option("--model", cfg.model, "stnn | timenn | distnn | lrt | lrd | all (comma list allowed)")
        ->capture_default_str();
    train->add_option("--data", cfg.data, "trip CSV or cache")->required();
    train->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
    train->add_option("--model-file", cfg.model_files, "model output path (single kind only)");

    auto* evaluate = app.add_subcommand("eval", "score models on a trip set");
    evaluate->add_option("--model-file", cfg.model_files, "model file(s)")->required();
    evaluate->add_option("--data", cfg.data, "trip CSV or cache")->required();
    evaluate->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
    evaluate->add_flag("--no-filter", cfg.no_filter, "score uncleaned trips (outlier robustness)");
    evaluate->add_option("--curve-time-bin", cfg.curve_time_bin_s, "travel-time curve bin (s)")->capture_default_str();
    evaluate->add_option("--curve-distance-bin", cfg.curve_distance_bin_mi, "distance curve bin (mi)")
        ->capture_default_str();

    auto* predict_cmd = app.add_subcommand("predict", "estimate distance and time for one query");
    predict_cmd->add_option("--model-file", cfg.model_files, "model file")->required()->expected(1);
    predict_cmd->add_option("--origin", cfg.origin, "lat,lon")->required();
    predict_cmd->add_option("--dest", cfg.dest, "lat,lon")->required();
    predict_cmd->add_option("--time", cfg.time, "\"YYYY-MM-DD HH:MM:SS\"")->required();

    for (auto* sub : {ingest, simulate, train, evaluate, predict_cmd}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Resolved resolved;
    try {
        resolved = resolve(cfg, app);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg, resolved, app, out);
        if (simulate->parsed()) return cmd_simulate(cfg, app, out);
        if (train->parsed()) return cmd_train(cfg, resolved, app, out);
        if (evaluate->parsed()) return cmd_eval(cfg, resolved, app, out);
        if (predict_cmd->parsed()) return cmd_predict(cfg, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    err << "error: no subcommand given\n";
    return kExitUsage;
}

int run(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace stnn::cli
