#include "dexhand/actuation.hpp"

#include <algorithm>
#include <numeric>

#include "dexhand/choreography.hpp"

namespace dexhand {

namespace {

constexpr std::array<std::string_view, kActuatorCount> kActuatorNames = {
    "thumb_flex",  "thumb_base",    "thumb_abdadd",  "index_flex",  "index_base",
    "index_abdadd", "middle_flex",  "middle_base",   "middle_abdadd", "little_flex",
    "little_base", "little_abdadd", "ring_all"};

constexpr std::array<JointRole, 3> kRingFlexRoles = {JointRole::J1_Distal, JointRole::J2_Middle,
                                                     JointRole::J3_Base};

}  // namespace

std::string_view to_string(ActuatorId a) { return kActuatorNames[static_cast<std::size_t>(a)]; }

DigitActuators actuators_of(DigitId digit) {
  switch (digit) {
    case DigitId::Thumb: return {ActuatorId::ThumbFlex, ActuatorId::ThumbBase, ActuatorId::ThumbAbdAdd};
    case DigitId::Index: return {ActuatorId::IndexFlex, ActuatorId::IndexBase, ActuatorId::IndexAbdAdd};
    case DigitId::Middle: return {ActuatorId::MiddleFlex, ActuatorId::MiddleBase, ActuatorId::MiddleAbdAdd};
    case DigitId::Little: return {ActuatorId::LittleFlex, ActuatorId::LittleBase, ActuatorId::LittleAbdAdd};
    case DigitId::Ring: break;
  }
  throw ArgumentError("the ring finger is driven by a single actuator");
}

CouplingConfig CouplingConfig::defaults(const HandSpec& spec) {
  auto ours_hi = [&](DigitId d, JointRole r) {
    const auto& iv = spec.joint({d, r}).rom_ours;
    if (!iv) throw ConfigError("no actuated range for " + joint_name({d, r}));
    return iv->hi();
  };
  CouplingConfig c;
  for (DigitId d : kTripleDigits)
    c.kappa[static_cast<std::size_t>(d)] = ours_hi(d, JointRole::J2_Middle) / ours_hi(d, JointRole::J1_Distal);
  c.kappa[static_cast<std::size_t>(DigitId::Ring)] = 1.0;  // unused
  for (std::size_t i = 0; i < 3; ++i) c.ring_profile[i] = ours_hi(DigitId::Ring, kRingFlexRoles[i]);
  return c;
}

void CouplingConfig::validate(const HandSpec& spec) const {
  for (DigitId d : kTripleDigits) {
    const double k = kappa_of(d);
    if (!(k > 0.0) || !std::isfinite(k))
      throw ConfigError("kappa for " + std::string(to_string(d)) + " must be positive");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const JointKey k{DigitId::Ring, kRingFlexRoles[i]};
    const auto& iv = spec.joint(k).rom_ours;
    if (!std::isfinite(ring_profile[i]) || (iv && (ring_profile[i] > iv->hi() || ring_profile[i] < iv->lo())))
      throw ConfigError("ring profile entry for " + joint_name(k) + " lies outside its actuated range");
  }
}

HandPose expand(const ActuatorVector& a, const CouplingConfig& coupling) {
  HandPose pose;
  for (DigitId d : kTripleDigits) {
    const DigitActuators ids = actuators_of(d);
    pose.at(d, JointRole::J1_Distal) = a[ids.flex];
    pose.at(d, JointRole::J2_Middle) = coupling.kappa_of(d) * a[ids.flex];
    pose.at(d, JointRole::J3_Base) = a[ids.base];
    pose.at(d, JointRole::J4_AbdAdd) = a[ids.abd_add];
  }
  const double u = a[ActuatorId::RingAll];
  for (std::size_t i = 0; i < 3; ++i) pose.at(DigitId::Ring, kRingFlexRoles[i]) = u * coupling.ring_profile[i];
  pose.at(DigitId::Ring, JointRole::J4_AbdAdd) = 0.0;
  return pose;
}

Projection project(const HandPose& pose, const CouplingConfig& coupling) {
  Projection out;
  ActuatorVector& a = out.actuators;
  for (DigitId d : kTripleDigits) {
    const DigitActuators ids = actuators_of(d);
    const double k = coupling.kappa_of(d);
    // argmin_f (f - J1)^2 + (k f - J2)^2
    a[ids.flex] = (pose.at(d, JointRole::J1_Distal) + k * pose.at(d, JointRole::J2_Middle)) / (1.0 + k * k);
    a[ids.base] = pose.at(d, JointRole::J3_Base);
    a[ids.abd_add] = pose.at(d, JointRole::J4_AbdAdd);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    num += coupling.ring_profile[i] * pose.at(DigitId::Ring, kRingFlexRoles[i]);
    den += coupling.ring_profile[i] * coupling.ring_profile[i];
  }
  a[ActuatorId::RingAll] = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
  out.residual = max_abs_diff(expand(a, coupling), pose);
  return out;
}

void TendonModel::set_moment_arm(JointKey k, double r_mm) {
  if (!(r_mm > 0.0)) throw ConfigError("moment arm for " + joint_name(k) + " must be positive");
  moment_arm_mm[k.index()] = r_mm;
}

double excursion(std::span<const std::pair<JointKey, double>> angles_deg, const TendonModel& model) {
  double e = 0.0;
  for (const auto& [joint, deg] : angles_deg) {
    auto it = model.moment_arm_mm.find(joint.index());
    if (it == model.moment_arm_mm.end()) throw ConfigError("no moment arm for " + joint_name(joint));
    e += it->second * deg_to_rad(deg);
  }
  return e;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("excursion and angle lists differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw FitError("linear fit needs at least 2 points");

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw FitError("linear fit: all excursions are equal");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::string export_actuator_csv(const Trajectory& trajectory, const CouplingConfig& coupling) {
  std::string out = "frame";
  for (std::size_t i = 0; i < kActuatorCount; ++i) {
    out += ',';
    out += to_string(static_cast<ActuatorId>(i));
  }
  out += ",residual_deg\n";
  for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
    const Projection p = project(trajectory.frames[f], coupling);
    out += std::to_string(f);
    for (double v : p.actuators.values()) {
      out += ',';
      out += format_g6(v);
    }
    out += ',';
    out += format_g6(p.residual);
    out += '\n';
  }
  return out;
}

}  // namespace dexhand
