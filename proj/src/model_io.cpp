#include "stnn/model_io.hpp"

#include <fstream>
#include <string>

#include "stnn/binary_io.hpp"
#include "stnn/error.hpp"

namespace stnn {

namespace {

constexpr std::string_view kMagic = "STNN";
constexpr std::uint32_t kMaxDim = 1u << 20;
constexpr std::uint64_t kMaxWeightsPerLayer = 1ull << 26;

void write_standardizer(std::ostream& out, const geo::Standardizer& s)
{
    binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(s.dims()));
    for (Eigen::Index i = 0; i < s.dims(); ++i) binio::write_f64(out, s.mean()[i]);
    for (Eigen::Index i = 0; i < s.dims(); ++i) binio::write_f64(out, s.stddev()[i]);
}

geo::Standardizer read_standardizer(binio::Reader& in, Eigen::Index expected_dims)
{
    const auto dims = in.read_uint<std::uint32_t>();
    if (dims != expected_dims) {
        throw FormatError(in.context() + ": standardizer has " + std::to_string(dims) + " dims, expected " +
                          std::to_string(expected_dims));
    }
    Eigen::VectorXd mean(dims), stddev(dims);
    for (std::uint32_t i = 0; i < dims; ++i) mean[i] = in.read_f64();
    for (std::uint32_t i = 0; i < dims; ++i) stddev[i] = in.read_f64();
    try {
        return {mean, stddev};
    } catch (const std::exception& e) {
        throw FormatError(in.context() + ": " + e.what());
    }
}

void write_context(std::ostream& out, const ModelContext& ctx)
{
    const auto& box = ctx.grid.bbox();
    binio::write_f64(out, box.lat_min);
    binio::write_f64(out, box.lat_max);
    binio::write_f64(out, box.lon_min);
    binio::write_f64(out, box.lon_max);
    binio::write_f64(out, ctx.grid.cell_size());
    binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ctx.timespec.cell_seconds));
    write_standardizer(out, ctx.features);
    write_standardizer(out, ctx.targets);
}

ModelContext read_context(binio::Reader& in)
{
    trips::BoundingBox box;
    box.lat_min = in.read_f64();
    box.lat_max = in.read_f64();
    box.lon_min = in.read_f64();
    box.lon_max = in.read_f64();
    const double cell_size = in.read_f64();
    geo::TimeSpec timespec{static_cast<std::int64_t>(in.read_uint<std::uint32_t>())};
    try {
        geo::GridSpec grid(box, cell_size);
        timespec.validate();
        auto features = read_standardizer(in, geo::kFeatureCount);
        auto targets = read_standardizer(in, 2);
        return {grid, timespec, std::move(features), std::move(targets)};
    } catch (const ConfigError& e) {
        throw FormatError(in.context() + ": " + e.what());
    }
}

void write_module_header(std::ostream& out, const nn::Mlp& mlp)
{
    binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(mlp.layer_count()));
    binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(mlp.input_dim()));
    for (const auto& layer : mlp.layers()) {
        binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(layer.out_dim()));
        binio::write_uint<std::uint8_t>(out, static_cast<std::uint8_t>(layer.activation));
    }
}

void write_module_weights(std::ostream& out, const nn::Mlp& mlp)
{
    for (const auto& layer : mlp.layers()) {
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                binio::write_f64(out, layer.weights(r, c));
            }
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
            binio::write_f64(out, layer.bias[r]);
        }
    }
}

struct ModuleShape {
    std::uint32_t input_dim = 0;
    std::vector<std::pair<std::uint32_t, nn::Activation>> layers;
};

ModuleShape read_module_header(binio::Reader& in)
{
    ModuleShape shape;
    const auto layer_count = in.read_uint<std::uint32_t>();
    shape.input_dim = in.read_uint<std::uint32_t>();
    if (layer_count == 0 || layer_count > 64 || shape.input_dim == 0 || shape.input_dim > kMaxDim) {
        throw FormatError(in.context() + ": implausible module shape");
    }
    for (std::uint32_t k = 0; k < layer_count; ++k) {
        const auto out_dim = in.read_uint<std::uint32_t>();
        const auto tag = in.read_uint<std::uint8_t>();
        if (out_dim == 0 || out_dim > kMaxDim || tag > static_cast<std::uint8_t>(nn::Activation::Tanh)) {
            throw FormatError(in.context() + ": bad layer descriptor");
        }
        shape.layers.emplace_back(out_dim, static_cast<nn::Activation>(tag));
    }
    return shape;
}

nn::Mlp read_module_weights(binio::Reader& in, const ModuleShape& shape)
{
    std::vector<nn::Layer> layers;
    Eigen::Index fan_in = shape.input_dim;
    for (const auto& [out_dim, activation] : shape.layers) {
        if (static_cast<std::uint64_t>(out_dim) * static_cast<std::uint64_t>(fan_in) > kMaxWeightsPerLayer) {
            throw FormatError(in.context() + ": implausible layer size");
        }
        nn::Layer layer;
        layer.activation = activation;
        layer.weights.resize(out_dim, fan_in);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                layer.weights(r, c) = in.read_f64();
            }
        }
        layer.bias.resize(out_dim);
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
            layer.bias[r] = in.read_f64();
        }
        fan_in = out_dim;
        layers.push_back(std::move(layer));
    }
    try {
        return nn::Mlp(std::move(layers));
    } catch (const ShapeError& e) {
        throw FormatError(in.context() + ": " + e.what());
    }
}

std::vector<const nn::Mlp*> modules_of(const AnyModel& model)
{
    if (const auto* m = std::get_if<StnnModel>(&model)) {
        return {&m->distance_module, &m->time_module};
    }
    if (const auto* m = std::get_if<baselines::NetBaseline>(&model)) {
        return {&m->net};
    }
    return {};
}

}  // namespace

ModelKind kind_of(const AnyModel& model)
{
    if (std::holds_alternative<StnnModel>(model)) {
        return ModelKind::Stnn;
    }
    if (const auto* m = std::get_if<baselines::LinearBaseline>(&model)) {
        return m->kind;
    }
    return std::get<baselines::NetBaseline>(model).kind;
}

const ModelContext& context_of(const AnyModel& model)
{
    return std::visit([](const auto& m) -> const ModelContext& { return m.context; }, model);
}

void save_model(std::ostream& out, const AnyModel& model)
{
    const auto kind = kind_of(model);
    const auto tag = model_tag(kind);
    binio::write_magic(out, kMagic);
    binio::write_uint<std::uint16_t>(out, kModelFormatVersion);
    binio::write_uint<std::uint8_t>(out, static_cast<std::uint8_t>(tag.size()));
    binio::write_magic(out, tag);
    write_context(out, context_of(model));

    const auto modules = modules_of(model);
    binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(modules.size()));
    for (const auto* m : modules) {
        write_module_header(out, *m);
    }
    for (const auto* m : modules) {
        write_module_weights(out, *m);
    }
    if (const auto* linear = std::get_if<baselines::LinearBaseline>(&model)) {
        const auto& w = linear->model.weights;
        binio::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            binio::write_f64(out, w[i]);
        }
        binio::write_f64(out, linear->model.intercept);
    }
    if (!out) {
        throw DataError("failed to write model");
    }
}

AnyModel load_model(std::istream& in)
{
    binio::Reader reader(in, "model file");
    reader.expect_magic(kMagic);
    const auto version = reader.read_uint<std::uint16_t>();
    if (version != kModelFormatVersion) {
        throw FormatError("model file: unsupported format version " + std::to_string(version) + " (this build reads " +
                          std::to_string(kModelFormatVersion) + ")");
    }
    const auto tag_length = reader.read_uint<std::uint8_t>();
    const auto tag = reader.read_bytes(tag_length);
    ModelKind kind{};
    try {
        kind = parse_model_kind(tag);
    } catch (const ConfigError&) {
        throw FormatError("model file: unknown model kind tag \"" + tag + "\"");
    }
    auto context = read_context(reader);

    const auto module_count = reader.read_uint<std::uint32_t>();
    const std::uint32_t expected_modules = kind == ModelKind::Stnn                                    ? 2
                                           : (kind == ModelKind::TimeNn || kind == ModelKind::DistNn) ? 1
                                                                                                      : 0;
    if (module_count != expected_modules) {
        throw FormatError("model file: " + tag + " expects " + std::to_string(expected_modules) + " modules, found " +
                          std::to_string(module_count));
    }
    std::vector<ModuleShape> shapes;
    for (std::uint32_t i = 0; i < module_count; ++i) {
        shapes.push_back(read_module_header(reader));
    }
    std::vector<nn::Mlp> modules;
    for (const auto& shape : shapes) {
        modules.push_back(read_module_weights(reader, shape));
    }

    AnyModel model;
    if (kind == ModelKind::Stnn) {
        StnnModel stnn{std::move(context), std::move(modules[0]), std::move(modules[1])};
        try {
            check_stnn_shapes(stnn);
        } catch (const ShapeError& e) {
            throw FormatError(std::string("model file: ") + e.what());
        }
        model = std::move(stnn);
    } else if (kind == ModelKind::TimeNn || kind == ModelKind::DistNn) {
        if (modules[0].input_dim() != baselines::baseline_input_dim(kind) || modules[0].output_dim() != 1) {
            throw FormatError("model file: " + tag + " network has the wrong input or output width");
        }
        model = baselines::NetBaseline{kind, std::move(context), std::move(modules[0])};
    } else {
        const auto dims = reader.read_uint<std::uint32_t>();
        if (dims != baselines::baseline_input_dim(kind)) {
            throw FormatError("model file: " + tag + " has " + std::to_string(dims) + " weights");
        }
        baselines::LinearModel linear;
        linear.weights.resize(dims);
        for (std::uint32_t i = 0; i < dims; ++i) {
            linear.weights[i] = reader.read_f64();
        }
        linear.intercept = reader.read_f64();
        model = baselines::LinearBaseline{kind, std::move(context), std::move(linear)};
    }
    reader.expect_end();
    return model;
}

void save_model_file(const std::filesystem::path& path, const AnyModel& model)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    save_model(out, model);
}

AnyModel load_model_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open model file " + path.string());
    }
    return load_model(in);
}

}  // namespace stnn
