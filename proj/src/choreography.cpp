#include "dexhand/choreography.hpp"

#include <algorithm>
#include <cmath>

namespace dexhand {

using json_io::Json;

// ---------------------------------------------------------------------------
// Script documents

ManipulationScript parse_script_json(const Json& doc, const std::string& path) {
  auto sub = [&](std::string_view key) { return path.empty() ? std::string(key) : path + "." + std::string(key); };

  ManipulationScript s;
  s.name = json_io::require_string(json_io::require_field(doc, "name", path), sub("name"));
  s.frame_rate = json_io::require_number(json_io::require_field(doc, "frame_rate_fps", path), sub("frame_rate_fps"));
  if (!(s.frame_rate > 0.0)) throw SchemaError(sub("frame_rate_fps"), "frame rate must be positive");
  if (auto it = doc.find("max_step_deg"); it != doc.end()) {
    s.max_step_deg = json_io::require_number(*it, sub("max_step_deg"));
    if (!(*s.max_step_deg > 0.0)) throw SchemaError(sub("max_step_deg"), "step limit must be positive");
  }
  if (auto it = doc.find("notes"); it != doc.end()) s.notes = json_io::require_string(*it, sub("notes"));

  const Json& kfs = json_io::require_field(doc, "key_frames", path);
  if (!kfs.is_array()) throw SchemaError(sub("key_frames"), "expected an array");
  if (kfs.size() < 2) throw SchemaError(sub("key_frames"), "a script needs at least 2 key frames");
  for (std::size_t i = 0; i < kfs.size(); ++i) {
    const std::string kpath = sub("key_frames") + "[" + std::to_string(i) + "]";
    const Json& kf = kfs[i];
    if (!kf.is_object()) throw SchemaError(kpath, "expected an object");
    KeyFrame k;
    const bool has_gesture = kf.contains("gesture");
    const bool has_pose = kf.contains("pose");
    if (has_gesture == has_pose) throw SchemaError(kpath, "exactly one of \"gesture\" or \"pose\" is required");
    if (has_gesture)
      k.target = json_io::require_string(kf["gesture"], kpath + ".gesture");
    else
      k.target = json_io::pose_from_json(kf["pose"], kpath + ".pose");
    if (i > 0) {
      const Json& iv = json_io::require_field(kf, "interval_frames", kpath);
      if (!iv.is_number_integer() || iv.get<long long>() < 1 || iv.get<long long>() > 1'000'000)
        throw SchemaError(kpath + ".interval_frames", "interval must be an integer >= 1");
      k.interval = static_cast<int>(iv.get<long long>());
    }
    s.key_frames.push_back(std::move(k));
  }
  return s;
}

ManipulationScript parse_script(std::string_view json_text) {
  return parse_script_json(json_io::parse(json_text, "script document"), "");
}

ManipulationScript load_script_file(const std::filesystem::path& path) {
  return parse_script(json_io::read_text(path));
}

Json script_to_json(const ManipulationScript& s) {
  Json doc = Json::object();
  doc["name"] = s.name;
  doc["frame_rate_fps"] = json_io::number(s.frame_rate);
  if (s.max_step_deg) doc["max_step_deg"] = json_io::number(*s.max_step_deg);
  Json kfs = Json::array();
  for (std::size_t i = 0; i < s.key_frames.size(); ++i) {
    const KeyFrame& k = s.key_frames[i];
    Json kf = Json::object();
    if (const auto* id = std::get_if<std::string>(&k.target))
      kf["gesture"] = *id;
    else
      kf["pose"] = json_io::pose_to_json(std::get<HandPose>(k.target));
    if (i > 0) kf["interval_frames"] = k.interval;
    kfs.push_back(std::move(kf));
  }
  doc["key_frames"] = std::move(kfs);
  if (!s.notes.empty()) doc["notes"] = s.notes;
  return doc;
}

std::string serialize_script(const ManipulationScript& script) { return json_io::dump(script_to_json(script)); }

ManipulationScript reversed(const ManipulationScript& script) {
  ManipulationScript out = script;
  const std::size_t n = script.key_frames.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.key_frames[i].target = script.key_frames[n - 1 - i].target;
    // segment (i-1 -> i) of the reversed script is segment (n-1-i -> n-i) of the original
    out.key_frames[i].interval = i == 0 ? 0 : script.key_frames[n - i].interval;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compilation

std::vector<HandPose> interpolate_segment(const HandPose& from, const HandPose& to, int T,
                                          kernels::Execution exec) {
  if (T < 1) throw ArgumentError("interval T must be at least 1 frame, got " + std::to_string(T));
  std::vector<HandPose> frames(static_cast<std::size_t>(T));
  kernels::interpolate_into(from, to, frames, exec);
  return frames;
}

std::vector<HandPose> resolve_key_frames(const ManipulationScript& script, const GestureSet& set) {
  std::vector<HandPose> poses;
  std::vector<std::string> unknown;
  for (const KeyFrame& k : script.key_frames) {
    if (const auto* id = std::get_if<std::string>(&k.target)) {
      if (const GestureRecord* r = set.try_find(*id)) {
        poses.push_back(r->pose);
      } else {
        unknown.push_back(*id);
      }
    } else {
      poses.push_back(std::get<HandPose>(k.target));
    }
  }
  if (!unknown.empty()) {
    std::string msg = "script \"" + script.name + "\" references unknown gesture";
    msg += unknown.size() > 1 ? "s:" : ":";
    for (const auto& id : unknown) msg += " " + id;
    throw CompileError(msg, std::move(unknown));
  }
  return poses;
}

Trajectory compile_script(const ManipulationScript& script, const GestureSet& set, kernels::Execution exec) {
  if (script.key_frames.size() < 2) throw CompileError("script \"" + script.name + "\" needs at least 2 key frames");
  if (!(script.frame_rate > 0.0)) throw CompileError("script \"" + script.name + "\" has a non-positive frame rate");
  for (std::size_t i = 1; i < script.key_frames.size(); ++i)
    if (script.key_frames[i].interval < 1)
      throw CompileError("key frame " + std::to_string(i) + " of \"" + script.name + "\" has interval < 1");

  const std::vector<HandPose> keys = resolve_key_frames(script, set);

  Trajectory traj;
  traj.frame_rate = script.frame_rate;
  std::size_t total = 1;
  for (std::size_t i = 1; i < keys.size(); ++i) total += static_cast<std::size_t>(script.key_frames[i].interval);
  traj.frames.resize(total);
  traj.frames[0] = keys[0];
  traj.key_frame_indices.push_back(0);

  std::size_t cursor = 1;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const auto T = static_cast<std::size_t>(script.key_frames[i].interval);
    kernels::interpolate_into(keys[i - 1], keys[i], std::span<HandPose>(traj.frames).subspan(cursor, T), exec);
    cursor += T;
    traj.key_frame_indices.push_back(cursor - 1);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Validation and metrics

double TrajectoryReport::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

bool TrajectoryReport::clean() const {
  return rom_violations.empty() && step_flags.empty() && max_residual() <= kExecutableResidualDeg;
}

TrajectoryReport validate_trajectory(const Trajectory& trajectory, const HandSpec& spec,
                                     const CouplingConfig& coupling, double max_step, kernels::Execution exec) {
  if (!(max_step > 0.0)) throw ArgumentError("max_step must be positive");
  TrajectoryReport report;
  report.max_step_limit = max_step;

  auto checks = kernels::check_poses(trajectory.frames, spec, coupling, Envelope::Ours, exec);
  report.residuals.reserve(checks.size());
  for (std::size_t f = 0; f < checks.size(); ++f) {
    report.residuals.push_back(checks[f].residual);
    if (!checks[f].violations.empty()) report.rom_violations.push_back({f, std::move(checks[f].violations)});
  }

  const auto& frames = trajectory.frames;
  const auto& keys = trajectory.key_frame_indices;
  report.max_step.fill(0.0);
  for (std::size_t s = 0; s + 1 < keys.size(); ++s) {
    const std::size_t begin = keys[s];
    const std::size_t end = keys[s + 1];
    if (end <= begin || end >= frames.size()) continue;
    std::array<double, kJointCount> seg_step{};
    for (std::size_t f = begin; f < end; ++f)
      for (std::size_t j = 0; j < kJointCount; ++j)
        seg_step[j] = std::max(seg_step[j], std::abs(frames[f + 1].angles()[j] - frames[f].angles()[j]));

    std::size_t worst = 0;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      report.max_step[j] = std::max(report.max_step[j], seg_step[j]);
      if (seg_step[j] > seg_step[worst]) worst = j;
    }
    if (seg_step[worst] > max_step + 1e-9) {
      const double delta = std::abs(frames[end].angles()[worst] - frames[begin].angles()[worst]);
      StepFlag flag;
      flag.segment = s;
      flag.joint = JointKey::from_index(worst);
      flag.step_deg = seg_step[worst];
      flag.interval = static_cast<int>(end - begin);
      flag.suggested_interval = static_cast<int>(std::ceil(delta / max_step - 1e-9));
      report.step_flags.push_back(flag);
    }
  }
  return report;
}

TrajectoryMetrics trajectory_metrics(const Trajectory& trajectory) {
  TrajectoryMetrics m;
  m.frame_count = trajectory.frames.size();
  m.gesture_count = trajectory.key_frame_indices.size();
  m.duration_s = m.frame_count > 0 ? static_cast<double>(m.frame_count - 1) / trajectory.frame_rate : 0.0;
  return m;
}

std::vector<JointSeries> joint_displacement_series(const Trajectory& trajectory, std::span<const JointKey> joints) {
  std::vector<JointKey> selection(joints.begin(), joints.end());
  if (selection.empty())
    for (std::size_t i = 0; i < kJointCount; ++i) selection.push_back(JointKey::from_index(i));

  std::vector<JointSeries> out;
  out.reserve(selection.size());
  for (JointKey k : selection) {
    JointSeries s{k, {}};
    s.samples.reserve(trajectory.frames.size());
    for (std::size_t f = 0; f < trajectory.frames.size(); ++f) s.samples.emplace_back(f, trajectory.frames[f][k]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<JointSeries> joint_displacement_series(const Trajectory& trajectory,
                                                   std::span<const std::string> joint_names) {
  std::vector<JointKey> keys;
  for (const auto& name : joint_names) {
    auto k = parse_joint(name);
    if (!k) throw ArgumentError("unknown joint \"" + name + "\"");
    keys.push_back(*k);
  }
  return joint_displacement_series(trajectory, std::span<const JointKey>(keys));
}

std::string export_trajectory_csv(const Trajectory& trajectory) {
  std::string out = "frame,is_key_frame";
  for (std::size_t j = 0; j < kJointCount; ++j) out += "," + joint_column(JointKey::from_index(j));
  out += '\n';
  std::size_t next_key = 0;
  for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
    bool is_key = false;
    while (next_key < trajectory.key_frame_indices.size() && trajectory.key_frame_indices[next_key] < f) ++next_key;
    if (next_key < trajectory.key_frame_indices.size() && trajectory.key_frame_indices[next_key] == f) is_key = true;
    out += std::to_string(f);
    out += is_key ? ",1" : ",0";
    for (double v : trajectory.frames[f].angles()) {
      out += ',';
      out += format_g6(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dexhand
