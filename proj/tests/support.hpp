#pragma once

#include <filesystem>
#include <random>

#include "dexhand/actuation.hpp"
#include "dexhand/gestures.hpp"
#include "dexhand/hand_model.hpp"
#include "dexhand/json_io.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return DEXHAND_TEST_DATA_DIR; }
inline std::filesystem::path golden_dir() { return DEXHAND_GOLDEN_DIR; }

inline const dexhand::HandSpec& default_spec() {
  static const dexhand::HandSpec spec = dexhand::load_hand_spec_file(data_dir() / "hand_spec.json");
  return spec;
}

inline const dexhand::CouplingConfig& default_coupling() {
  static const dexhand::CouplingConfig c = dexhand::CouplingConfig::defaults(default_spec());
  return c;
}

inline const dexhand::GestureSet& default_gestures() {
  static const dexhand::GestureSet set =
      dexhand::load_gesture_set_file(data_dir() / "gestures.json", default_spec()).set;
  return set;
}

inline dexhand::HandPose random_pose(std::mt19937_64& rng, double lo = -120.0, double hi = 120.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  dexhand::HandPose p;
  for (double& a : p.angles()) a = u(rng);
  return p;
}

/// Flex/Base/AbdAdd in [-90, 120] degrees, ring u in [0, 1].
inline dexhand::ActuatorVector random_actuators(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> deg(-90.0, 120.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  dexhand::ActuatorVector a;
  for (std::size_t i = 0; i < dexhand::kActuatorCount; ++i) {
    auto id = static_cast<dexhand::ActuatorId>(i);
    a[id] = id == dexhand::ActuatorId::RingAll ? unit(rng) : deg(rng);
  }
  return a;
}

}  // namespace testing
