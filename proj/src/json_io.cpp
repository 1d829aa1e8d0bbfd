#include "dexhand/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dexhand::json_io {

Json number(double v) {
  if (v == 0.0) return 0;  // folds -0.0
  if (std::abs(v) < 1e15 && std::trunc(v) == v) return static_cast<std::int64_t>(v);
  return v;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw SchemaError("", what + " is not valid JSON: " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double require_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

const std::string& require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get_ref<const std::string&>();
}

const Json& require_field(const Json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? std::string(key) : path + "." + std::string(key),
                                         "missing field");
  return *it;
}

Json pose_to_json(const HandPose& pose) {
  Json out = Json::object();
  for (DigitId d : kAllDigits) {
    Json digit = Json::object();
    for (JointRole r : kAllRoles) digit[std::string(to_string(r))] = number(pose.at(d, r));
    out[std::string(to_string(d))] = std::move(digit);
  }
  return out;
}

HandPose pose_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "pose must be an object keyed by digit");
  for (const auto& [key, _] : j.items())
    if (!parse_digit(key)) throw SchemaError(path + "." + key, "unknown digit");
  HandPose pose;
  for (DigitId d : kAllDigits) {
    std::string dpath = path + "." + std::string(to_string(d));
    const Json& digit = require_field(j, to_string(d), path);
    if (!digit.is_object()) throw SchemaError(dpath, "expected an object keyed by joint role");
    for (const auto& [key, _] : digit.items())
      if (!parse_role(key)) throw SchemaError(dpath + "." + key, "unknown joint role");
    for (JointRole r : kAllRoles) {
      const Json& v = require_field(digit, to_string(r), dpath);
      pose.at(d, r) = require_number(v, dpath + "." + std::string(to_string(r)));
    }
  }
  return pose;
}

Json interval_to_json(const OptionalInterval& iv) {
  if (!iv) return nullptr;
  return Json::array({number(iv->lo()), number(iv->hi())});
}

Json violation_to_json(const PoseViolation& v) {
  Json out = Json::object();
  out["joint"] = joint_name(v.joint);
  out["angle_deg"] = number(v.angle);
  out["excess_deg"] = number(v.excess);
  out["unactuated"] = v.unactuated;
  return out;
}

Json chain_to_json(const DigitChain& chain) {
  Json out = Json::array();
  for (const Vec3& p : chain) out.push_back(Json::array({p.x, p.y, p.z}));
  return out;
}

}  // namespace dexhand::json_io
