#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dexhand/actuation.hpp"
#include "dexhand/gestures.hpp"
#include "dexhand/hand_model.hpp"
#include "dexhand/json_io.hpp"
#include "dexhand/kernels.hpp"

namespace dexhand {

/// Default per-joint speed limit used when validating trajectories, degrees per frame.
inline constexpr double kDefaultMaxStepDeg = 5.0;

struct KeyFrame {
  std::variant<std::string, HandPose> target;  // gesture id or inline pose
  int interval = 0;                            // frames from the previous key frame; unused on the first

  friend bool operator==(const KeyFrame&, const KeyFrame&) = default;
};

struct ManipulationScript {
  std::string name;
  std::vector<KeyFrame> key_frames;
  double frame_rate = 1.0;
  std::optional<double> max_step_deg;
  std::string notes;

  friend bool operator==(const ManipulationScript&, const ManipulationScript&) = default;
};

/// Parses a script document; enforces >= 2 key frames, interval >= 1 and frame_rate > 0.
ManipulationScript parse_script(std::string_view json_text);
ManipulationScript parse_script_json(const json_io::Json& doc, const std::string& path);
ManipulationScript load_script_file(const std::filesystem::path& path);
std::string serialize_script(const ManipulationScript& script);
json_io::Json script_to_json(const ManipulationScript& script);

/// Same key frames in reverse order with the segment intervals carried along.
ManipulationScript reversed(const ManipulationScript& script);

struct Trajectory {
  std::vector<HandPose> frames;
  std::vector<std::size_t> key_frame_indices;
  double frame_rate = 1.0;
};

/// Frames t = 1..T of θ_i + t(θ_next − θ_i)/T; frame T is `to` itself.
std::vector<HandPose> interpolate_segment(const HandPose& from, const HandPose& to, int T,
                                          kernels::Execution exec = kernels::Execution::Serial);

/// Thrown when a script cannot be compiled; `unknown_ids` lists unresolved gesture ids.
class CompileError : public Error {
 public:
  CompileError(const std::string& message, std::vector<std::string> unknown_ids = {})
      : Error(message), unknown_ids_(std::move(unknown_ids)) {}
  const std::vector<std::string>& unknown_ids() const noexcept { return unknown_ids_; }

 private:
  std::vector<std::string> unknown_ids_;
};

/// Resolves each key frame to its pose.
std::vector<HandPose> resolve_key_frames(const ManipulationScript& script, const GestureSet& set);

/// Frame 0 is the first key frame; total frames = 1 + Σ interval.
Trajectory compile_script(const ManipulationScript& script, const GestureSet& set,
                          kernels::Execution exec = kernels::Execution::Serial);

struct StepFlag {
  std::size_t segment = 0;  // 0-based segment between key frames segment and segment+1
  JointKey joint;
  double step_deg = 0.0;
  int interval = 0;
  int suggested_interval = 0;  // ceil(|Δ| / max_step)
};

struct FrameViolations {
  std::size_t frame = 0;
  std::vector<PoseViolation> violations;
};

struct TrajectoryReport {
  std::vector<FrameViolations> rom_violations;  // frames with at least one "ours" violation
  std::vector<double> residuals;                // coupling residual per frame
  std::array<double, kJointCount> max_step{};   // largest inter-frame change per joint
  std::vector<StepFlag> step_flags;
  double max_step_limit = kDefaultMaxStepDeg;

  double max_residual() const;
  /// No ROM violations, every residual within the executability bound, no step flags.
  bool clean() const;
};

TrajectoryReport validate_trajectory(const Trajectory& trajectory, const HandSpec& spec,
                                     const CouplingConfig& coupling, double max_step = kDefaultMaxStepDeg,
                                     kernels::Execution exec = kernels::Execution::Serial);

struct TrajectoryMetrics {
  double duration_s = 0.0;
  std::size_t gesture_count = 0;
  std::size_t frame_count = 0;
};

TrajectoryMetrics trajectory_metrics(const Trajectory& trajectory);

struct JointSeries {
  JointKey joint;
  std::vector<std::pair<std::size_t, double>> samples;  // (frame, degrees)
};

/// Empty selection means all 20 joints.
std::vector<JointSeries> joint_displacement_series(const Trajectory& trajectory, std::span<const JointKey> joints);
/// Names as "Index.J3_Base" or "index_j3"; throws ArgumentError on an unknown name.
std::vector<JointSeries> joint_displacement_series(const Trajectory& trajectory,
                                                   std::span<const std::string> joint_names);

/// frame,is_key_frame,thumb_j1,...,little_j4
std::string export_trajectory_csv(const Trajectory& trajectory);

}  // namespace dexhand
