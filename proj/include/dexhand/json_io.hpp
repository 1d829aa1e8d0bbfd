#pragma once

// JSON plumbing shared by the document loaders, the CLI and the HTTP service.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dexhand/core.hpp"
#include "dexhand/hand_model.hpp"

namespace dexhand::json_io {

using Json = nlohmann::ordered_json;

/// Integral values are emitted as JSON integers so documents stay diff-friendly.
Json number(double v);

/// Canonical text: two-space indent, trailing newline.
std::string dump(const Json& j);

Json parse(std::string_view text, const std::string& what);

/// Whole file as text. Throws ConfigError if unreadable.
std::string read_text(const std::filesystem::path& path);

double require_number(const Json& j, const std::string& path);
const std::string& require_string(const Json& j, const std::string& path);
const Json& require_field(const Json& obj, std::string_view key, const std::string& path);

/// {"Thumb": {"J1_Distal": deg, ...}, ...}
Json pose_to_json(const HandPose& pose);
/// Every digit and role must be present; unknown keys are rejected.
HandPose pose_from_json(const Json& j, const std::string& path);

Json interval_to_json(const OptionalInterval& iv);
Json violation_to_json(const PoseViolation& v);
Json chain_to_json(const DigitChain& chain);

}  // namespace dexhand::json_io
