#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dexhand {

// Canonical order is the declaration order; it drives serialization and CSV columns.
enum class DigitId { Thumb = 0, Index, Middle, Ring, Little };

// J1 = DIP (thumb IP), J2 = PIP (thumb MCP), J3 = MCP flexion (thumb CMC), J4 = abduction/adduction.
enum class JointRole { J1_Distal = 0, J2_Middle, J3_Base, J4_AbdAdd };

inline constexpr std::size_t kDigitCount = 5;
inline constexpr std::size_t kRolesPerDigit = 4;
inline constexpr std::size_t kJointCount = kDigitCount * kRolesPerDigit;

inline constexpr std::array<DigitId, kDigitCount> kAllDigits = {
    DigitId::Thumb, DigitId::Index, DigitId::Middle, DigitId::Ring, DigitId::Little};
inline constexpr std::array<JointRole, kRolesPerDigit> kAllRoles = {
    JointRole::J1_Distal, JointRole::J2_Middle, JointRole::J3_Base, JointRole::J4_AbdAdd};

struct JointKey {
  DigitId digit = DigitId::Thumb;
  JointRole role = JointRole::J1_Distal;

  constexpr std::size_t index() const {
    return static_cast<std::size_t>(digit) * kRolesPerDigit + static_cast<std::size_t>(role);
  }
  static constexpr JointKey from_index(std::size_t i) {
    return {static_cast<DigitId>(i / kRolesPerDigit), static_cast<JointRole>(i % kRolesPerDigit)};
  }
  friend constexpr bool operator==(JointKey, JointKey) = default;
};

std::string_view to_string(DigitId d);
std::string_view to_string(JointRole r);
/// "Index.J3_Base"
std::string joint_name(JointKey k);
/// Lowercase column name, e.g. "index_j3".
std::string joint_column(JointKey k);

std::optional<DigitId> parse_digit(std::string_view s);
std::optional<JointRole> parse_role(std::string_view s);
std::optional<JointKey> parse_joint(std::string_view s);

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// ---------------------------------------------------------------------------
// Errors. Every failure raised by the library derives from dexhand::Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document; `path` names the offending location, e.g. "joints[3].rom_ours".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  NotFoundError(std::string key, std::vector<std::string> suggestions);
  const std::string& key() const noexcept { return key_; }
  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  std::string key_;
  std::vector<std::string> suggestions_;
};

// ---------------------------------------------------------------------------

/// Closed interval of joint angles in degrees. Construction enforces lo <= hi.
class AngleInterval {
 public:
  AngleInterval() = default;
  AngleInterval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  bool contains(double deg) const noexcept { return deg >= lo_ && deg <= hi_; }
  /// Signed distance outside the interval: negative below lo, positive above hi, 0 inside.
  double excess(double deg) const noexcept;

  friend bool operator==(const AngleInterval&, const AngleInterval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Length of the intersection; 0 for disjoint intervals. Symmetric in its arguments.
double overlap_length(const AngleInterval& a, const AngleInterval& b) noexcept;

/// An envelope entry; std::nullopt marks a joint the design does not actuate.
using OptionalInterval = std::optional<AngleInterval>;

/// 20 joint angles in degrees, indexed canonically by (digit, role).
/// ROM feasibility is not part of the type; see validate_pose.
class HandPose {
 public:
  HandPose() { angles_.fill(0.0); }
  explicit HandPose(const std::array<double, kJointCount>& angles) : angles_(angles) {}

  double operator[](JointKey k) const { return angles_[k.index()]; }
  double& operator[](JointKey k) { return angles_[k.index()]; }
  double at(DigitId d, JointRole r) const { return angles_[JointKey{d, r}.index()]; }
  double& at(DigitId d, JointRole r) { return angles_[JointKey{d, r}.index()]; }

  const std::array<double, kJointCount>& angles() const noexcept { return angles_; }
  std::array<double, kJointCount>& angles() noexcept { return angles_; }

  bool all_finite() const;

  friend bool operator==(const HandPose&, const HandPose&) = default;

 private:
  std::array<double, kJointCount> angles_;
};

/// Six significant digits, as used in every CSV export; negative zero prints as "0".
std::string format_g6(double v);

/// Largest absolute per-joint difference.
double max_abs_diff(const HandPose& a, const HandPose& b);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

}  // namespace dexhand
