#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/episode.hpp"
#include "wristservo/masks.hpp"
#include "wristservo/servo.hpp"
#include "wristservo/wrist_model.hpp"

namespace wristservo {

enum class Phase { Idle, Transport, Rotation, Grasping };

enum class EventKind { ArmRaised, EmgRotationTrigger, EmgClose, EmgOpen, ArmLowered };

struct TriggerEvent {
  EventKind kind = EventKind::ArmRaised;
  double t = 0.0;
};

struct GraspPlan {
  PartLabel selected_label = PartLabel::TopGrasp;
  JointState target_joints;
};

enum class CommandKind {
  None,
  /// Joint velocity from visual servoing (Transport only).
  ServoVelocity,
  GraspPlan,
  /// Joint velocity of the proportional move toward the grasp target.
  RotationVelocity,
  FingersClose,
  FingersOpen,
};

struct Command {
  CommandKind kind = CommandKind::None;
  JointVelocity velocity;
  std::optional<GraspPlan> plan;
};

enum class Notice { None, NoGraspablePart, Unreachable, ObjectLost, ObjectLostTimeout };

std::string_view to_string(Phase phase);
std::string_view to_string(EventKind kind);
std::string_view to_string(CommandKind kind);
std::string_view to_string(Notice notice);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct LabelTargetOptions {
  Vec3 top_direction{0.0, 0.0, -1.0};
  double max_misalignment = deg2rad(25.0);
  double grid_step = deg2rad(2.5);
};

/// Joint configuration that orients the palm for the grasp type: palm down for
/// TopGrasp, palm horizontal and facing the object for SideGrasp. Coarse grid over
/// the joint limits followed by a pattern-search refinement.
JointState label_to_wrist_target(PartLabel label, const Pose& hand_pose,
                                 const Vec3& object_centroid_world, const WristParams& params,
                                 const LabelTargetOptions& options = {});

/// Unit world direction the palm normal should reach for `label`.
Vec3 grasp_direction(PartLabel label, const Pose& hand_pose, const Vec3& object_centroid_world,
                     const LabelTargetOptions& options = {});

struct PipelineConfig {
  ControllerKind controller = ControllerKind::PartitionedIbvs;
  ControllerConfig servo;
  EpisodeOptions vision;
  LabelTargetOptions targets;
  double rotation_gain = 2.0;
  double rotation_tolerance = deg2rad(5.0);
  /// Ticks the last servo command is held after the object disappears.
  int lost_grace_ticks = 8;
};

struct PipelineEnvironment {
  WristParams params = WristParams::hannes();
  CameraIntrinsics intrinsics;
  PipelineConfig config;
};

struct SessionState {
  Phase phase = Phase::Idle;
  std::optional<GraspPlan> plan;
  JointVelocity last_servo;
  int lost_ticks = 0;
  bool lost_flag = false;
};

/// Per-tick inputs from the mask provider and the arm.
struct TickInput {
  std::span<const PartMask> masks;
  JointState q;
  Pose hand_pose;
  Vec3 object_centroid_world = Vec3::Zero();
};

struct StepOutput {
  SessionState state;
  Command command;
  Notice notice = Notice::None;
  /// Centroid fed to the servo law on Transport ticks.
  std::optional<Vec2> servo_centroid_px;
};

/// One tick of the shared-autonomy state machine. Pure: the output depends only
/// on the arguments. Events that are illegal in the current phase are ignored.
StepOutput step(const SessionState& state, const std::optional<TriggerEvent>& event,
                const TickInput& input, const PipelineEnvironment& env);

struct SessionRecord {
  int tick = 0;
  double t = 0.0;
  std::optional<EventKind> event;
  Phase phase = Phase::Idle;
  Command command;
  Notice notice = Notice::None;
  JointState q;
};

/// Replays an event log against the simulator at the servo rate, one event per
/// tick at most, until `duration` seconds have elapsed.
std::vector<SessionRecord> run_session(std::span<const TriggerEvent> events,
                                       const SceneObject& scene, const Pose& hand_pose,
                                       const JointState& q0, const PipelineEnvironment& env,
                                       double duration);

}  // namespace wristservo
