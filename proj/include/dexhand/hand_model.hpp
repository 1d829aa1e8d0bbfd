#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dexhand/core.hpp"

namespace dexhand {

struct CouplingConfig;

enum class Envelope { Human, Grasping, Ours };

std::string_view to_string(Envelope e);
std::optional<Envelope> parse_envelope(std::string_view s);

struct JointSpec {
  JointKey joint;
  AngleInterval rom_human;
  AngleInterval rom_grasping;
  OptionalInterval rom_ours;
  std::optional<double> phalanx_length_mm;  // absent on J4 rows
};

/// Full kinematic description of the hand. Immutable once loaded.
class HandSpec {
 public:
  HandSpec(std::array<JointSpec, kJointCount> joints, std::array<double, kDigitCount> fingertip_force_n);

  const JointSpec& joint(JointKey k) const { return joints_[k.index()]; }
  const std::array<JointSpec, kJointCount>& joints() const noexcept { return joints_; }
  double fingertip_force(DigitId d) const { return forces_[static_cast<std::size_t>(d)]; }

  /// Envelope interval of a joint; human and grasping are always present.
  OptionalInterval envelope(JointKey k, Envelope e) const;

  friend bool operator==(const HandSpec&, const HandSpec&) = default;

 private:
  std::array<JointSpec, kJointCount> joints_;
  std::array<double, kDigitCount> forces_;
};

/// Parses and validates a hand-spec JSON document. Throws SchemaError naming the offending path.
HandSpec load_hand_spec(std::string_view json_text);
HandSpec load_hand_spec_file(const std::filesystem::path& path);
/// Canonical JSON rendering; the shipped default document is stored in this form.
std::string serialize_hand_spec(const HandSpec& spec);

struct PoseViolation {
  JointKey joint;
  double angle = 0.0;
  double excess = 0.0;  // signed degrees outside the envelope
  bool unactuated = false;
};

/// Joints outside the chosen envelope. A joint without an envelope passes only at exactly 0.
std::vector<PoseViolation> validate_pose(const HandPose& pose, const HandSpec& spec, Envelope envelope);
std::string describe(const PoseViolation& v);

enum class CoverageAggregation { PerJointMean, LengthWeighted };
enum class AbsentPolicy { Exclude, IncludeAsZero };

struct CoverageResult {
  double fraction = 0.0;
  std::size_t joints_used = 0;
  std::vector<std::string> warnings;
};

/// Fraction of the reference envelope covered by the target envelope.
///
/// Per joint, ratio = |target ∩ reference| / |reference|. Per-joint mean averages the ratios;
/// length-weighted returns Σ|∩| / Σ|reference|. Reference joints that are absent or have zero
/// length are skipped with a warning.
CoverageResult rom_coverage(const HandSpec& spec, Envelope target, Envelope reference,
                            CoverageAggregation aggregation = CoverageAggregation::PerJointMean,
                            AbsentPolicy absent = AbsentPolicy::Exclude);

/// Points of one digit chain: base, J3 pivot, J2, J1, fingertip (mm).
///
/// Frame: x along the straight digit, z along the palm normal (dorsal). J4 rotates the digit
/// about z; J3, J2 and J1 are successive flexions about the rotated lateral axis, bending the
/// chain toward -z. The base and J3 pivot coincide.
using DigitChain = std::array<Vec3, 5>;

DigitChain forward_kinematics(const HandPose& pose, const HandSpec& spec, DigitId digit);

/// Fingertip positions while the digit's flexion actuators sweep from 0 to the top of the
/// "ours" ROM under the coupling law, with J4 held at 0.
std::vector<Vec3> fingertip_trajectory(const HandSpec& spec, DigitId digit, const CouplingConfig& coupling,
                                       std::size_t samples);

/// Coordinates of a J4 = 0 chain in its flexion plane: (x, -z), so flexion increases the polar angle.
std::vector<Vec2> flexion_plane(std::span<const Vec3> points);

struct SpiralFit {
  double a = 0.0;  // scale
  double b = 0.0;  // growth rate per radian
  double r_squared = 0.0;
};

/// Least-squares fit of ln r = ln a + b·θ about the origin. Polar angles are unwrapped in
/// input order.
SpiralFit log_spiral_fit(std::span<const Vec2> points);

}  // namespace dexhand
