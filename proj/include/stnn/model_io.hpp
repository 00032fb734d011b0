#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <variant>

#include "stnn/baselines.hpp"
#include "stnn/joint_model.hpp"

namespace stnn {

// Layout is documented in docs/model_format.md.
inline constexpr std::uint16_t kModelFormatVersion = 1;

using AnyModel = std::variant<StnnModel, baselines::LinearBaseline, baselines::NetBaseline>;

ModelKind kind_of(const AnyModel& model);
const ModelContext& context_of(const AnyModel& model);

void save_model(std::ostream& out, const AnyModel& model);
// Throws FormatError on bad magic, unsupported version, truncation or
// inconsistent shapes. Nothing is returned unless the whole file parses.
AnyModel load_model(std::istream& in);

void save_model_file(const std::filesystem::path& path, const AnyModel& model);
AnyModel load_model_file(const std::filesystem::path& path);

}  // namespace stnn
