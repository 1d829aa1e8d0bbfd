#include "dexhand/kernels.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dexhand::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Loop body shared by both paths; `body(i)` must only write slot i.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  const auto count = static_cast<std::int64_t>(n);
  if (exec == Execution::Serial) {
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace

std::vector<PoseCheck> check_poses(std::span<const HandPose> poses, const HandSpec& spec,
                                   const CouplingConfig& coupling, Envelope envelope, Execution exec) {
  std::vector<PoseCheck> out(poses.size());
  for_each_index(poses.size(), exec, [&](std::size_t i) {
    out[i].violations = validate_pose(poses[i], spec, envelope);
    out[i].residual = project(poses[i], coupling).residual;
  });
  return out;
}

std::vector<Projection> project_poses(std::span<const HandPose> poses, const CouplingConfig& coupling,
                                      Execution exec) {
  std::vector<Projection> out(poses.size());
  for_each_index(poses.size(), exec, [&](std::size_t i) { out[i] = project(poses[i], coupling); });
  return out;
}

std::vector<DigitChain> forward_kinematics_batch(std::span<const HandPose> poses, const HandSpec& spec,
                                                 DigitId digit, Execution exec) {
  // Surface a missing length before entering the parallel region.
  if (!poses.empty()) (void)forward_kinematics(poses.front(), spec, digit);
  std::vector<DigitChain> out(poses.size());
  for_each_index(poses.size(), exec, [&](std::size_t i) { out[i] = forward_kinematics(poses[i], spec, digit); });
  return out;
}

void interpolate_into(const HandPose& from, const HandPose& to, std::span<HandPose> out, Execution exec) {
  const std::size_t frames = out.size();
  if (frames == 0) throw ArgumentError("interval T must be at least 1 frame");
  const double denom = static_cast<double>(frames);
  for_each_index(frames, exec, [&](std::size_t i) {
    const std::size_t t = i + 1;
    if (t == frames) {
      out[i] = to;
      return;
    }
    HandPose p;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const double a = from.angles()[j];
      p.angles()[j] = a + static_cast<double>(t) * (to.angles()[j] - a) / denom;
    }
    out[i] = p;
  });
}

}  // namespace dexhand::kernels
