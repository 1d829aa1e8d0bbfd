#include "dexhand/core.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace dexhand {

namespace {

constexpr std::array<std::string_view, kDigitCount> kDigitNames = {"Thumb", "Index", "Middle", "Ring",
                                                                  "Little"};
constexpr std::array<std::string_view, kRolesPerDigit> kRoleNames = {"J1_Distal", "J2_Middle", "J3_Base",
                                                                    "J4_AbdAdd"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join_suggestions(const std::string& key, const std::vector<std::string>& suggestions) {
  std::string msg = "not found: \"" + key + "\"";
  if (!suggestions.empty()) {
    msg += " (did you mean ";
    for (std::size_t i = 0; i < suggestions.size(); ++i) {
      if (i) msg += ", ";
      msg += "\"" + suggestions[i] + "\"";
    }
    msg += "?)";
  }
  return msg;
}

}  // namespace

std::string_view to_string(DigitId d) { return kDigitNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(JointRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }

std::string joint_name(JointKey k) {
  return std::string(to_string(k.digit)) + "." + std::string(to_string(k.role));
}

std::string joint_column(JointKey k) {
  return lower(to_string(k.digit)) + "_j" + std::to_string(static_cast<int>(k.role) + 1);
}

std::optional<DigitId> parse_digit(std::string_view s) {
  for (std::size_t i = 0; i < kDigitNames.size(); ++i)
    if (kDigitNames[i] == s) return static_cast<DigitId>(i);
  return std::nullopt;
}

std::optional<JointRole> parse_role(std::string_view s) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i)
    if (kRoleNames[i] == s) return static_cast<JointRole>(i);
  return std::nullopt;
}

std::optional<JointKey> parse_joint(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    // column form: index_j3
    for (std::size_t i = 0; i < kJointCount; ++i)
      if (joint_column(JointKey::from_index(i)) == s) return JointKey::from_index(i);
    return std::nullopt;
  }
  auto d = parse_digit(s.substr(0, dot));
  auto r = parse_role(s.substr(dot + 1));
  if (!d || !r) return std::nullopt;
  return JointKey{*d, *r};
}

NotFoundError::NotFoundError(std::string key, std::vector<std::string> suggestions)
    : Error(join_suggestions(key, suggestions)), key_(std::move(key)), suggestions_(std::move(suggestions)) {}

AngleInterval::AngleInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ArgumentError("interval bounds must be finite");
  if (lo > hi)
    throw ArgumentError("interval lower bound " + std::to_string(lo) + " exceeds upper bound " +
                        std::to_string(hi));
}

double AngleInterval::excess(double deg) const noexcept {
  if (deg < lo_) return deg - lo_;
  if (deg > hi_) return deg - hi_;
  return 0.0;
}

double overlap_length(const AngleInterval& a, const AngleInterval& b) noexcept {
  return std::max(0.0, std::min(a.hi(), b.hi()) - std::max(a.lo(), b.lo()));
}

bool HandPose::all_finite() const {
  return std::all_of(angles_.begin(), angles_.end(), [](double v) { return std::isfinite(v); });
}

std::string format_g6(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string out(buf);
  return out == "-0" ? "0" : out;
}

double max_abs_diff(const HandPose& a, const HandPose& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < kJointCount; ++i) m = std::max(m, std::abs(a.angles()[i] - b.angles()[i]));
  return m;
}

}  // namespace dexhand
