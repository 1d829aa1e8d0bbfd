#include "dexhand/hand_model.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "dexhand/actuation.hpp"
#include "dexhand/json_io.hpp"

namespace dexhand {

using json_io::Json;

std::string_view to_string(Envelope e) {
  switch (e) {
    case Envelope::Human: return "human";
    case Envelope::Grasping: return "grasping";
    case Envelope::Ours: return "ours";
  }
  return "?";
}

std::optional<Envelope> parse_envelope(std::string_view s) {
  if (s == "human") return Envelope::Human;
  if (s == "grasping") return Envelope::Grasping;
  if (s == "ours") return Envelope::Ours;
  return std::nullopt;
}

HandSpec::HandSpec(std::array<JointSpec, kJointCount> joints, std::array<double, kDigitCount> forces)
    : joints_(std::move(joints)), forces_(forces) {
  for (std::size_t i = 0; i < kJointCount; ++i)
    if (joints_[i].joint.index() != i) throw ConfigError("joint table is not in canonical order");
}

OptionalInterval HandSpec::envelope(JointKey k, Envelope e) const {
  const JointSpec& j = joint(k);
  switch (e) {
    case Envelope::Human: return j.rom_human;
    case Envelope::Grasping: return j.rom_grasping;
    case Envelope::Ours: return j.rom_ours;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Document I/O

namespace {

AngleInterval parse_interval(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "interval must be a 2-element array [lo, hi]");
  double lo = json_io::require_number(j[0], path + "[0]");
  double hi = json_io::require_number(j[1], path + "[1]");
  if (lo > hi) throw SchemaError(path, "malformed interval: lo > hi");
  return AngleInterval(lo, hi);
}

}  // namespace

HandSpec load_hand_spec(std::string_view json_text) {
  Json doc = json_io::parse(json_text, "hand-spec document");
  if (!doc.is_object()) throw SchemaError("", "hand-spec document must be an object");

  const Json& rows = json_io::require_field(doc, "joints", "");
  if (!rows.is_array()) throw SchemaError("joints", "expected an array");

  std::array<std::optional<JointSpec>, kJointCount> table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "joints[" + std::to_string(i) + "]";
    const Json& row = rows[i];
    const std::string& dname = json_io::require_string(json_io::require_field(row, "digit", path), path + ".digit");
    const std::string& rname = json_io::require_string(json_io::require_field(row, "role", path), path + ".role");
    auto digit = parse_digit(dname);
    if (!digit) throw SchemaError(path + ".digit", "unknown digit \"" + dname + "\"");
    auto role = parse_role(rname);
    if (!role) throw SchemaError(path + ".role", "unknown role \"" + rname + "\"");

    JointSpec js;
    js.joint = {*digit, *role};
    js.rom_human = parse_interval(json_io::require_field(row, "rom_human", path), path + ".rom_human");
    js.rom_grasping = parse_interval(json_io::require_field(row, "rom_grasping", path), path + ".rom_grasping");
    const Json& ours = json_io::require_field(row, "rom_ours", path);
    if (!ours.is_null()) js.rom_ours = parse_interval(ours, path + ".rom_ours");
    const Json& len = json_io::require_field(row, "length_mm", path);
    if (!len.is_null()) {
      double mm = json_io::require_number(len, path + ".length_mm");
      if (mm <= 0) throw SchemaError(path + ".length_mm", "length must be positive");
      js.phalanx_length_mm = mm;
    }
    auto& slot = table[js.joint.index()];
    if (slot) throw SchemaError(path, "duplicate joint " + joint_name(js.joint));
    slot = js;
  }

  std::array<JointSpec, kJointCount> joints;
  for (std::size_t i = 0; i < kJointCount; ++i) {
    if (!table[i]) throw SchemaError("joints", "missing joint " + joint_name(JointKey::from_index(i)));
    joints[i] = *table[i];
  }

  const Json& forces = json_io::require_field(doc, "fingertip_force_n", "");
  if (!forces.is_object()) throw SchemaError("fingertip_force_n", "expected an object keyed by digit");
  for (const auto& [key, _] : forces.items())
    if (!parse_digit(key)) throw SchemaError("fingertip_force_n." + key, "unknown digit");
  std::array<double, kDigitCount> f{};
  for (DigitId d : kAllDigits) {
    const Json& v = json_io::require_field(forces, to_string(d), "fingertip_force_n");
    f[static_cast<std::size_t>(d)] =
        json_io::require_number(v, "fingertip_force_n." + std::string(to_string(d)));
  }
  return HandSpec(joints, f);
}

HandSpec load_hand_spec_file(const std::filesystem::path& path) {
  return load_hand_spec(json_io::read_text(path));
}

std::string serialize_hand_spec(const HandSpec& spec) {
  Json doc = Json::object();
  Json rows = Json::array();
  for (const JointSpec& j : spec.joints()) {
    Json row = Json::object();
    row["digit"] = std::string(to_string(j.joint.digit));
    row["role"] = std::string(to_string(j.joint.role));
    row["rom_human"] = json_io::interval_to_json(j.rom_human);
    row["rom_grasping"] = json_io::interval_to_json(j.rom_grasping);
    row["rom_ours"] = json_io::interval_to_json(j.rom_ours);
    row["length_mm"] = j.phalanx_length_mm ? json_io::number(*j.phalanx_length_mm) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  doc["joints"] = std::move(rows);
  Json forces = Json::object();
  for (DigitId d : kAllDigits) forces[std::string(to_string(d))] = json_io::number(spec.fingertip_force(d));
  doc["fingertip_force_n"] = std::move(forces);
  return json_io::dump(doc);
}

// ---------------------------------------------------------------------------
// Validation and coverage

std::vector<PoseViolation> validate_pose(const HandPose& pose, const HandSpec& spec, Envelope envelope) {
  std::vector<PoseViolation> out;
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const JointKey k = JointKey::from_index(i);
    const double angle = pose[k];
    const OptionalInterval iv = spec.envelope(k, envelope);
    if (!iv) {
      if (angle != 0.0) out.push_back({k, angle, angle, true});
      continue;
    }
    const double ex = iv->excess(angle);
    if (ex != 0.0 || !std::isfinite(angle)) out.push_back({k, angle, ex, false});
  }
  return out;
}

std::string describe(const PoseViolation& v) {
  char buf[160];
  if (v.unactuated)
    std::snprintf(buf, sizeof buf, "%s = %g deg: unactuated joint must stay at 0", joint_name(v.joint).c_str(),
                  v.angle);
  else
    std::snprintf(buf, sizeof buf, "%s = %g deg: outside envelope by %+g deg", joint_name(v.joint).c_str(),
                  v.angle, v.excess);
  return buf;
}

CoverageResult rom_coverage(const HandSpec& spec, Envelope target, Envelope reference,
                            CoverageAggregation aggregation, AbsentPolicy absent) {
  CoverageResult result;
  double ratio_sum = 0.0;
  double overlap_sum = 0.0;
  double reference_sum = 0.0;
  for (const JointSpec& j : spec.joints()) {
    const OptionalInterval ref = spec.envelope(j.joint, reference);
    const OptionalInterval tgt = spec.envelope(j.joint, target);
    if (!ref || ref->length() <= 0.0) {
      result.warnings.push_back(joint_name(j.joint) + ": reference interval is " +
                                (ref ? "zero-length" : "absent") + ", excluded");
      continue;
    }
    double overlap = 0.0;
    if (tgt) {
      overlap = overlap_length(*tgt, *ref);
    } else if (absent == AbsentPolicy::Exclude) {
      continue;
    }
    ratio_sum += overlap / ref->length();
    overlap_sum += overlap;
    reference_sum += ref->length();
    ++result.joints_used;
  }
  if (result.joints_used == 0) return result;
  result.fraction = aggregation == CoverageAggregation::PerJointMean
                        ? ratio_sum / static_cast<double>(result.joints_used)
                        : overlap_sum / reference_sum;
  return result;
}

// ---------------------------------------------------------------------------
// Kinematics

DigitChain forward_kinematics(const HandPose& pose, const HandSpec& spec, DigitId digit) {
  std::array<double, 3> lengths{};  // proximal, middle, distal
  constexpr std::array<JointRole, 3> chain_roles = {JointRole::J3_Base, JointRole::J2_Middle,
                                                    JointRole::J1_Distal};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& len = spec.joint({digit, chain_roles[i]}).phalanx_length_mm;
    if (!len) throw ConfigError("missing phalanx length for " + joint_name({digit, chain_roles[i]}));
    lengths[i] = *len;
  }

  const double yaw = deg_to_rad(pose.at(digit, JointRole::J4_AbdAdd));
  const double cy = std::cos(yaw);
  const double sy = std::sin(yaw);

  DigitChain pts{};
  double pitch = 0.0;
  Vec3 p{};
  for (std::size_t i = 0; i < 3; ++i) {
    pitch += deg_to_rad(pose.at(digit, chain_roles[i]));
    // Rz(yaw) * Ry(pitch) applied to the digit axis (1, 0, 0).
    const Vec3 dir{cy * std::cos(pitch), sy * std::cos(pitch), -std::sin(pitch)};
    p = p + lengths[i] * dir;
    pts[i + 2] = p;
  }
  return pts;
}

std::vector<Vec3> fingertip_trajectory(const HandSpec& spec, DigitId digit, const CouplingConfig& coupling,
                                       std::size_t samples) {
  if (samples < 2) throw ArgumentError("fingertip trajectory needs at least 2 samples");

  auto ours_hi = [&](JointRole r) {
    const auto& iv = spec.joint({digit, r}).rom_ours;
    if (!iv) throw ConfigError("no actuated range for " + joint_name({digit, r}));
    return iv->hi();
  };

  std::vector<Vec3> tips;
  tips.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double frac = static_cast<double>(s) / static_cast<double>(samples - 1);
    ActuatorVector act;
    if (digit == DigitId::Ring) {
      act[ActuatorId::RingAll] = frac;
    } else {
      const DigitActuators ids = actuators_of(digit);
      act[ids.flex] = frac * ours_hi(JointRole::J1_Distal);
      act[ids.base] = frac * ours_hi(JointRole::J3_Base);
    }
    tips.push_back(forward_kinematics(expand(act, coupling), spec, digit).back());
  }
  return tips;
}

std::vector<Vec2> flexion_plane(std::span<const Vec3> points) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back({p.x, -p.z});
  return out;
}

SpiralFit log_spiral_fit(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  if (n < 3) throw FitError("log-spiral fit needs at least 3 points");

  std::vector<double> theta(n);
  std::vector<double> log_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::hypot(points[i].x, points[i].y);
    if (!(r > 0.0)) throw FitError("log-spiral fit: point " + std::to_string(i) + " lies at the origin");
    log_r[i] = std::log(r);
    double t = std::atan2(points[i].y, points[i].x);
    if (i > 0) {
      while (t - theta[i - 1] > std::numbers::pi) t -= 2 * std::numbers::pi;
      while (t - theta[i - 1] < -std::numbers::pi) t += 2 * std::numbers::pi;
    }
    theta[i] = t;
  }

  const double mean_t = std::accumulate(theta.begin(), theta.end(), 0.0) / n;
  const double mean_y = std::accumulate(log_r.begin(), log_r.end(), 0.0) / n;
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (theta[i] - mean_t) * (theta[i] - mean_t);
    sty += (theta[i] - mean_t) * (log_r[i] - mean_y);
    syy += (log_r[i] - mean_y) * (log_r[i] - mean_y);
  }
  if (stt <= 1e-24 * n) throw FitError("log-spiral fit: all points share one polar angle");

  SpiralFit fit;
  fit.b = sty / stt;
  fit.a = std::exp(mean_y - fit.b * mean_t);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = log_r[i] - (mean_y + fit.b * (theta[i] - mean_t));
    ss_res += e * e;
  }
  // Constant radius: nothing to explain, a perfect fit iff residuals vanish too.
  const double floor = 1e-20 * n * std::max(1.0, mean_y * mean_y);
  if (syy <= floor)
    fit.r_squared = ss_res <= floor ? 1.0 : 0.0;
  else
    fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

}  // namespace dexhand
