#pragma once

#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/geometry.hpp"
#include "wristservo/masks.hpp"
#include "wristservo/scene.hpp"

namespace wristservo {

/// Direction of the displacement poses in an input file.
/// PrevToNext: entry for frame k is T_{c^{k-1},c^k}. NextToPrev: its inverse.
enum class DisplacementConvention { PrevToNext, NextToPrev };

/// What a discarded frame does to the chain.
/// ComposeThrough: its displacement is still composed, only the frame is dropped.
/// BreakChain: the chain restarts at the next kept frame from a re-init pose.
enum class GapPolicy { ComposeThrough, BreakChain };

struct FramePose {
  int frame = 0;
  Pose pose;
};

struct AnnotationInput {
  DisplacementConvention convention = DisplacementConvention::PrevToNext;
  int first_frame = 1;
  Pose initial_pose;                    // T_{c^first,o}
  std::vector<FramePose> displacements;  // keyed by the frame they lead into
  std::vector<int> discarded;
  std::vector<FramePose> reinit;        // BreakChain only
  GapPolicy gap_policy = GapPolicy::ComposeThrough;

  void validate() const;
};

struct FrameAnnotation {
  int frame_index = 0;
  Pose pose;  // T_{c^k,o}
  std::vector<PartMask> masks;
};

/// Chained poses of the kept frames, without rendering.
std::vector<FramePose> chain_sequence(const AnnotationInput& input);

/// Discarded frames that fall inside the annotated range.
std::vector<int> sequence_gaps(const AnnotationInput& input);

/// Chains the poses then renders masks at full resolution. Frames where the
/// object is out of view get an empty mask list. `workers` <= 0 picks the
/// hardware concurrency.
std::vector<FrameAnnotation> annotate_sequence(const AnnotationInput& input,
                                               const CameraIntrinsics& intrinsics,
                                               const SceneObject& object, int workers = 1);

}  // namespace wristservo
