#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dexhand/core.hpp"
#include "dexhand/hand_model.hpp"

namespace dexhand {

struct Trajectory;

// Canonical order: the actuator CSV columns follow it.
enum class ActuatorId {
  ThumbFlex = 0,
  ThumbBase,
  ThumbAbdAdd,
  IndexFlex,
  IndexBase,
  IndexAbdAdd,
  MiddleFlex,
  MiddleBase,
  MiddleAbdAdd,
  LittleFlex,
  LittleBase,
  LittleAbdAdd,
  RingAll,
};

inline constexpr std::size_t kActuatorCount = 13;

/// "thumb_flex", ..., "ring_all"
std::string_view to_string(ActuatorId a);

/// The four digits driven by a (Flex, Base, AbdAdd) triple.
inline constexpr std::array<DigitId, 4> kTripleDigits = {DigitId::Thumb, DigitId::Index, DigitId::Middle,
                                                         DigitId::Little};

struct DigitActuators {
  ActuatorId flex;
  ActuatorId base;
  ActuatorId abd_add;
};
/// Precondition: digit != Ring.
DigitActuators actuators_of(DigitId digit);

/// Flex/Base/AbdAdd hold the driven joint angle in degrees; RingAll holds u in [0, 1].
class ActuatorVector {
 public:
  ActuatorVector() { values_.fill(0.0); }
  explicit ActuatorVector(const std::array<double, kActuatorCount>& v) : values_(v) {}

  double operator[](ActuatorId a) const { return values_[static_cast<std::size_t>(a)]; }
  double& operator[](ActuatorId a) { return values_[static_cast<std::size_t>(a)]; }
  const std::array<double, kActuatorCount>& values() const noexcept { return values_; }

  friend bool operator==(const ActuatorVector&, const ActuatorVector&) = default;

 private:
  std::array<double, kActuatorCount> values_;
};

/// Underactuation law. kappa is the passive J2 angle per degree of J1 (ignored for the ring);
/// ring_profile holds the ring (J1, J2, J3) angles at u = 1.
struct CouplingConfig {
  std::array<double, kDigitCount> kappa{};
  std::array<double, 3> ring_profile{};

  /// kappa = hi(J2 ours) / hi(J1 ours); ring profile = ring "ours" maxima.
  static CouplingConfig defaults(const HandSpec& spec);

  double kappa_of(DigitId d) const { return kappa[static_cast<std::size_t>(d)]; }

  /// Throws ConfigError on a non-positive kappa or a ring profile beyond the ring "ours" maxima.
  void validate(const HandSpec& spec) const;
};

HandPose expand(const ActuatorVector& actuators, const CouplingConfig& coupling);

struct Projection {
  ActuatorVector actuators;
  double residual = 0.0;  // max |expand(actuators) - pose| over all 20 joints, degrees
};

/// Per-digit closed-form least-squares inverse of expand; ring u is clamped to [0, 1].
Projection project(const HandPose& pose, const CouplingConfig& coupling);

/// Moment arms r (mm) per joint for E = r·φ.
struct TendonModel {
  std::map<std::size_t, double> moment_arm_mm;  // keyed by JointKey::index()
  double offset_mm = 0.0;                       // intercept reported by a fitted model

  void set_moment_arm(JointKey k, double r_mm);
};

/// E = Σ r_j·φ_j, angles given in degrees. Throws ConfigError for joints without a moment arm.
double excursion(std::span<const std::pair<JointKey, double>> angles_deg, const TendonModel& model);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of angle on excursion (φ = a·E + b).
LinearFit fit_linear(std::span<const double> excursions_mm, std::span<const double> angles_deg);

/// Actuator command table for a compiled trajectory; one row per frame.
std::string export_actuator_csv(const Trajectory& trajectory, const CouplingConfig& coupling);

}  // namespace dexhand
