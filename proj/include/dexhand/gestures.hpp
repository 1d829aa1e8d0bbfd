#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dexhand/actuation.hpp"
#include "dexhand/core.hpp"
#include "dexhand/hand_model.hpp"

namespace dexhand {

enum class GestureCategory { FeixGrasp, Kapandji, TranslationRotation };
enum class GestureSource { Measured, Authored };

std::string_view to_string(GestureCategory c);
std::optional<GestureCategory> parse_category(std::string_view s);
std::string_view to_string(GestureSource s);

struct GestureRecord {
  std::string id;
  std::string name;
  GestureCategory category = GestureCategory::FeixGrasp;
  HandPose pose;
  GestureSource source = GestureSource::Authored;
  std::string notes;

  friend bool operator==(const GestureRecord&, const GestureRecord&) = default;
};

/// Ordered, id-unique collection of base gestures.
class GestureSet {
 public:
  GestureSet() = default;
  GestureSet(std::string hand_spec_ref, std::vector<GestureRecord> records);

  const std::string& hand_spec_ref() const noexcept { return hand_spec_ref_; }
  const std::vector<GestureRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const GestureRecord* try_find(std::string_view id) const;
  std::vector<const GestureRecord*> by_category(GestureCategory c) const;

  friend bool operator==(const GestureSet& a, const GestureSet& b) {
    return a.hand_spec_ref_ == b.hand_spec_ref_ && a.records_ == b.records_;
  }

 private:
  std::string hand_spec_ref_;
  std::vector<GestureRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class LoadMode { Strict, Lenient };

struct GestureLoadResult {
  GestureSet set;
  std::vector<std::string> warnings;  // lenient mode: one line per out-of-envelope joint
};

/// Loads a gesture-set document and checks every pose against the "ours" envelope.
/// Strict mode throws SchemaError on the first offending record; lenient mode keeps it and warns.
GestureLoadResult load_gesture_set(std::string_view json_text, const HandSpec& spec,
                                   LoadMode mode = LoadMode::Strict);
GestureLoadResult load_gesture_set_file(const std::filesystem::path& path, const HandSpec& spec,
                                        LoadMode mode = LoadMode::Strict);
std::string serialize_gesture_set(const GestureSet& set);

/// Case-sensitive lookup; NotFoundError carries the nearest ids by edit distance.
const GestureRecord& find_gesture(const GestureSet& set, std::string_view id);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// Maximum coupling residual for a pose to count as reachable by the 13 actuators.
inline constexpr double kExecutableResidualDeg = 2.0;

struct Executability {
  std::vector<PoseViolation> violations;  // against the "ours" envelope
  double residual = 0.0;
  bool ok() const { return violations.empty() && residual <= kExecutableResidualDeg; }
};

Executability assess_pose(const HandPose& pose, const HandSpec& spec, const CouplingConfig& coupling);

/// Highest k such that Kapandji positions 0..k are all executable; -1 if position 0 fails.
/// Positions are the records with ids kapandji_0 .. kapandji_10.
int kapandji_score(const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling);

}  // namespace dexhand
