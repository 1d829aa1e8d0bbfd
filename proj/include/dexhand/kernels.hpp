#pragma once

// Batch kernels over frame/pose sequences. Each has a serial reference path and an OpenMP
// path; both produce identical results element by element.

#include <span>
#include <vector>

#include "dexhand/actuation.hpp"
#include "dexhand/hand_model.hpp"

namespace dexhand::kernels {

enum class Execution { Serial, Parallel };

/// Threads the parallel path would use (1 when built without OpenMP).
int max_threads();

struct PoseCheck {
  std::vector<PoseViolation> violations;
  double residual = 0.0;
};

std::vector<PoseCheck> check_poses(std::span<const HandPose> poses, const HandSpec& spec,
                                   const CouplingConfig& coupling, Envelope envelope, Execution exec);

std::vector<Projection> project_poses(std::span<const HandPose> poses, const CouplingConfig& coupling,
                                      Execution exec);

std::vector<DigitChain> forward_kinematics_batch(std::span<const HandPose> poses, const HandSpec& spec,
                                                 DigitId digit, Execution exec);

/// Fills out[t-1] with frame t of the linear segment from `from` to `to` over out.size() frames.
void interpolate_into(const HandPose& from, const HandPose& to, std::span<HandPose> out, Execution exec);

}  // namespace dexhand::kernels
