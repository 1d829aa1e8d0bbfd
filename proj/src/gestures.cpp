#include "dexhand/gestures.hpp"

#include <algorithm>
#include <numeric>

#include "dexhand/json_io.hpp"

namespace dexhand {

using json_io::Json;

std::string_view to_string(GestureCategory c) {
  switch (c) {
    case GestureCategory::FeixGrasp: return "FeixGrasp";
    case GestureCategory::Kapandji: return "Kapandji";
    case GestureCategory::TranslationRotation: return "TranslationRotation";
  }
  return "?";
}

std::optional<GestureCategory> parse_category(std::string_view s) {
  if (s == "FeixGrasp") return GestureCategory::FeixGrasp;
  if (s == "Kapandji") return GestureCategory::Kapandji;
  if (s == "TranslationRotation") return GestureCategory::TranslationRotation;
  return std::nullopt;
}

std::string_view to_string(GestureSource s) { return s == GestureSource::Measured ? "measured" : "authored"; }

GestureSet::GestureSet(std::string hand_spec_ref, std::vector<GestureRecord> records)
    : hand_spec_ref_(std::move(hand_spec_ref)), records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].name.empty()) throw SchemaError("gestures[" + std::to_string(i) + "].name", "empty name");
    if (!index_.emplace(records_[i].id, i).second)
      throw SchemaError("gestures[" + std::to_string(i) + "].id", "duplicate id \"" + records_[i].id + "\"");
  }
}

const GestureRecord* GestureSet::try_find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<const GestureRecord*> GestureSet::by_category(GestureCategory c) const {
  std::vector<const GestureRecord*> out;
  for (const auto& r : records_)
    if (r.category == c) out.push_back(&r);
  return out;
}

GestureLoadResult load_gesture_set(std::string_view json_text, const HandSpec& spec, LoadMode mode) {
  Json doc = json_io::parse(json_text, "gesture-set document");
  const std::string& ref = json_io::require_string(json_io::require_field(doc, "hand_spec_ref", ""), "hand_spec_ref");
  const Json& arr = json_io::require_field(doc, "gestures", "");
  if (!arr.is_array()) throw SchemaError("gestures", "expected an array");

  GestureLoadResult result;
  std::vector<GestureRecord> records;
  records.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "gestures[" + std::to_string(i) + "]";
    const Json& g = arr[i];
    GestureRecord r;
    r.id = json_io::require_string(json_io::require_field(g, "id", path), path + ".id");
    if (r.id.empty()) throw SchemaError(path + ".id", "empty id");
    r.name = json_io::require_string(json_io::require_field(g, "name", path), path + ".name");
    const std::string& cat = json_io::require_string(json_io::require_field(g, "category", path), path + ".category");
    auto c = parse_category(cat);
    if (!c) throw SchemaError(path + ".category", "unknown category \"" + cat + "\"");
    r.category = *c;
    const std::string& src = json_io::require_string(json_io::require_field(g, "source", path), path + ".source");
    if (src == "measured")
      r.source = GestureSource::Measured;
    else if (src == "authored")
      r.source = GestureSource::Authored;
    else
      throw SchemaError(path + ".source", "unknown source \"" + src + "\"");
    r.pose = json_io::pose_from_json(json_io::require_field(g, "pose", path), path + ".pose");
    if (auto it = g.find("notes"); it != g.end()) r.notes = json_io::require_string(*it, path + ".notes");

    auto violations = validate_pose(r.pose, spec, Envelope::Ours);
    if (!violations.empty()) {
      if (mode == LoadMode::Strict) {
        std::string msg = "pose of \"" + r.id + "\" violates the actuated envelope:";
        for (const auto& v : violations) msg += "\n  " + describe(v);
        throw SchemaError(path + ".pose", msg);
      }
      for (const auto& v : violations) result.warnings.push_back(r.id + ": " + describe(v));
    }
    records.push_back(std::move(r));
  }
  result.set = GestureSet(ref, std::move(records));
  return result;
}

GestureLoadResult load_gesture_set_file(const std::filesystem::path& path, const HandSpec& spec, LoadMode mode) {
  return load_gesture_set(json_io::read_text(path), spec, mode);
}

std::string serialize_gesture_set(const GestureSet& set) {
  Json doc = Json::object();
  doc["hand_spec_ref"] = set.hand_spec_ref();
  Json arr = Json::array();
  for (const auto& r : set.records()) {
    Json g = Json::object();
    g["id"] = r.id;
    g["name"] = r.name;
    g["category"] = std::string(to_string(r.category));
    g["source"] = std::string(to_string(r.source));
    g["pose"] = json_io::pose_to_json(r.pose);
    if (!r.notes.empty()) g["notes"] = r.notes;
    arr.push_back(std::move(g));
  }
  doc["gestures"] = std::move(arr);
  return json_io::dump(doc);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

const GestureRecord& find_gesture(const GestureSet& set, std::string_view id) {
  if (const GestureRecord* r = set.try_find(id)) return *r;

  const std::size_t limit = std::max<std::size_t>(2, id.size() / 4);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& r : set.records()) {
    const std::size_t d = edit_distance(id, r.id);
    if (d <= limit) scored.emplace_back(d, r.id);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> suggestions;
  for (std::size_t i = 0; i < scored.size() && i < 3; ++i) suggestions.push_back(scored[i].second);
  throw NotFoundError(std::string(id), std::move(suggestions));
}

Executability assess_pose(const HandPose& pose, const HandSpec& spec, const CouplingConfig& coupling) {
  return {validate_pose(pose, spec, Envelope::Ours), project(pose, coupling).residual};
}

int kapandji_score(const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling) {
  std::vector<const GestureRecord*> positions(11, nullptr);
  for (int k = 0; k <= 10; ++k) {
    const GestureRecord* r = set.try_find("kapandji_" + std::to_string(k));
    if (!r || r->category != GestureCategory::Kapandji)
      throw ConfigError("missing Kapandji position kapandji_" + std::to_string(k));
    positions[k] = r;
  }
  int score = -1;
  for (int k = 0; k <= 10; ++k) {
    if (!assess_pose(positions[k]->pose, spec, coupling).ok()) break;
    score = k;
  }
  return score;
}

}  // namespace dexhand
