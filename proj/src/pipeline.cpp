#include "wristservo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wristservo/errors.hpp"
#include "wristservo/render.hpp"

namespace wristservo {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Idle: return "Idle";
    case Phase::Transport: return "Transport";
    case Phase::Rotation: return "Rotation";
    case Phase::Grasping: return "Grasping";
  }
  return "Idle";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ArmRaised: return "ArmRaised";
    case EventKind::EmgRotationTrigger: return "EmgRotationTrigger";
    case EventKind::EmgClose: return "EmgClose";
    case EventKind::EmgOpen: return "EmgOpen";
    case EventKind::ArmLowered: return "ArmLowered";
  }
  return "ArmRaised";
}

std::string_view to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::None: return "none";
    case CommandKind::ServoVelocity: return "servo_velocity";
    case CommandKind::GraspPlan: return "grasp_plan";
    case CommandKind::RotationVelocity: return "rotation_velocity";
    case CommandKind::FingersClose: return "fingers_close";
    case CommandKind::FingersOpen: return "fingers_open";
  }
  return "none";
}

std::string_view to_string(Notice notice) {
  switch (notice) {
    case Notice::None: return "";
    case Notice::NoGraspablePart: return "NoGraspablePart";
    case Notice::Unreachable: return "Unreachable";
    case Notice::ObjectLost: return "ObjectLost";
    case Notice::ObjectLostTimeout: return "ObjectLostTimeout";
  }
  return "";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind k : {EventKind::ArmRaised, EventKind::EmgRotationTrigger, EventKind::EmgClose,
                      EventKind::EmgOpen, EventKind::ArmLowered}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

Vec3 grasp_direction(PartLabel label, const Pose& hand_pose, const Vec3& object_centroid_world,
                     const LabelTargetOptions& options) {
  switch (label) {
    case PartLabel::TopGrasp:
      return options.top_direction.normalized();
    case PartLabel::SideGrasp: {
      Vec3 d = object_centroid_world - hand_pose.translation();
      d.z() = 0.0;
      if (d.norm() < 1e-9) throw Unreachable("object is straight below the hand; no side direction");
      return d.normalized();
    }
    case PartLabel::NoGrasp:
      break;
  }
  throw NoGraspLabel("NoGrasp parts have no wrist target");
}

JointState label_to_wrist_target(PartLabel label, const Pose& hand_pose,
                                 const Vec3& object_centroid_world, const WristParams& params,
                                 const LabelTargetOptions& options) {
  if (label == PartLabel::NoGrasp) throw NoGraspLabel("NoGrasp parts have no wrist target");
  const Vec3 target = hand_pose.rotation().transpose() *
                      grasp_direction(label, hand_pose, object_centroid_world, options);

  const JointLimits& fe = params.wfe_limits;
  const JointLimits& ps = params.wps_limits;
  // The small pull toward q = 0 makes ties (e.g. WPS when the normal lies on
  // the WPS axis) resolve deterministically.
  auto cost = [&](const JointState& q) {
    const double c = std::clamp(palm_normal_world(params, q).dot(target), -1.0, 1.0);
    return std::acos(c) + 1e-9 * (q.wfe * q.wfe + q.wps * q.wps);
  };

  JointState best{fe.clamp(0.0), ps.clamp(0.0)};
  double best_cost = cost(best);
  const int n_fe = static_cast<int>(std::floor((fe.max - fe.min) / options.grid_step));
  const int n_ps = static_cast<int>(std::floor((ps.max - ps.min) / options.grid_step));
  for (int i = 0; i <= n_fe; ++i) {
    for (int j = 0; j <= n_ps; ++j) {
      const JointState q{fe.min + i * options.grid_step, ps.min + j * options.grid_step};
      const double c = cost(q);
      if (c < best_cost) {
        best_cost = c;
        best = q;
      }
    }
  }

  for (double h = options.grid_step; h > 1e-9; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      const JointState candidates[4] = {{fe.clamp(best.wfe + h), best.wps},
                                        {fe.clamp(best.wfe - h), best.wps},
                                        {best.wfe, ps.clamp(best.wps + h)},
                                        {best.wfe, ps.clamp(best.wps - h)}};
      for (const JointState& q : candidates) {
        const double c = cost(q);
        if (c < best_cost - 1e-15) {
          best_cost = c;
          best = q;
          improved = true;
        }
      }
    }
  }

  const double misalignment =
      std::acos(std::clamp(palm_normal_world(params, best).dot(target), -1.0, 1.0));
  if (misalignment > options.max_misalignment) {
    throw Unreachable("best wrist configuration is " + std::to_string(rad2deg(misalignment)) +
                      " deg away from the grasp direction");
  }
  return best;
}

namespace {

bool event_is(const std::optional<TriggerEvent>& e, EventKind k) { return e && e->kind == k; }

StepOutput transport_tick(const SessionState& state, const TickInput& input,
                          const PipelineEnvironment& env) {
  StepOutput out;
  out.state = state;
  if (input.masks.empty()) {
    out.state.lost_flag = true;
    if (state.lost_ticks < env.config.lost_grace_ticks) {
      out.state.lost_ticks = state.lost_ticks + 1;
      out.command = {CommandKind::ServoVelocity, state.last_servo, std::nullopt};
      out.notice = Notice::ObjectLost;
    } else {
      out.state.last_servo = {};
      out.command = {CommandKind::ServoVelocity, JointVelocity{}, std::nullopt};
      out.notice = Notice::ObjectLostTimeout;
    }
    return out;
  }

  // Servo on the whole object: merged regions, never single parts.
  const std::vector<MergedRegion> regions =
      merge_object_mask(input.masks, env.config.vision.adjacency_px);
  const MergedRegion& region =
      select_nearest_to_center(std::span<const MergedRegion>(regions), env.intrinsics);
  const FeaturePoint f = region_feature(env.intrinsics, region, env.config.vision);
  const FeaturePoint target = center_feature();
  const JointVelocity qdot =
      env.config.controller == ControllerKind::StandardIbvs
          ? sibvs_step(f, target, input.q, env.params, env.config.servo)
          : ppibvs_step(f, target, input.q, env.params, env.config.servo, region.centroid,
                        env.intrinsics);
  out.state.last_servo = qdot;
  out.state.lost_ticks = 0;
  out.command = {CommandKind::ServoVelocity, qdot, std::nullopt};
  out.servo_centroid_px = region.centroid;
  return out;
}

}  // namespace

StepOutput step(const SessionState& state, const std::optional<TriggerEvent>& event,
                const TickInput& input, const PipelineEnvironment& env) {
  StepOutput out;
  out.state = state;

  switch (state.phase) {
    case Phase::Idle:
      if (event_is(event, EventKind::ArmRaised)) {
        out.state = SessionState{};
        out.state.phase = Phase::Transport;
      }
      return out;

    case Phase::Transport: {
      if (event_is(event, EventKind::EmgRotationTrigger)) {
        std::vector<PartMask> graspable;
        for (const PartMask& m : input.masks) {
          if (m.label != PartLabel::NoGrasp) graspable.push_back(m);
        }
        if (graspable.empty()) {
          StepOutput tick = transport_tick(state, input, env);
          tick.notice = Notice::NoGraspablePart;
          return tick;
        }
        const PartMask& part =
            select_nearest_to_center(std::span<const PartMask>(graspable), env.intrinsics);
        try {
          const GraspPlan plan{part.label,
                               label_to_wrist_target(part.label, input.hand_pose,
                                                     input.object_centroid_world, env.params,
                                                     env.config.targets)};
          out.state.phase = Phase::Rotation;
          out.state.plan = plan;
          out.command = {CommandKind::GraspPlan, JointVelocity{}, plan};
          return out;
        } catch (const Unreachable&) {
          StepOutput tick = transport_tick(state, input, env);
          tick.notice = Notice::Unreachable;
          return tick;
        }
      }
      return transport_tick(state, input, env);
    }

    case Phase::Rotation: {
      const JointState& target = state.plan->target_joints;
      const double d_fe = target.wfe - input.q.wfe;
      const double d_ps = target.wps - input.q.wps;
      if (std::max(std::abs(d_fe), std::abs(d_ps)) <= env.config.rotation_tolerance) {
        out.state.phase = Phase::Grasping;
        return out;
      }
      out.command = {CommandKind::RotationVelocity,
                     {env.config.rotation_gain * d_fe, env.config.rotation_gain * d_ps},
                     std::nullopt};
      return out;
    }

    case Phase::Grasping:
      if (event_is(event, EventKind::EmgClose)) {
        out.command.kind = CommandKind::FingersClose;
      } else if (event_is(event, EventKind::EmgOpen)) {
        out.command.kind = CommandKind::FingersOpen;
      } else if (event_is(event, EventKind::ArmLowered)) {
        out.state = SessionState{};
      }
      return out;
  }
  return out;
}

std::vector<SessionRecord> run_session(std::span<const TriggerEvent> events,
                                       const SceneObject& scene, const Pose& hand_pose,
                                       const JointState& q0, const PipelineEnvironment& env,
                                       double duration) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t < events[i - 1].t) throw InvalidArgument("event timestamps must be monotone");
  }
  check_limits(env.params, q0);
  const double dt = env.config.servo.dt;
  const int ticks = static_cast<int>(std::floor(duration / dt + 1e-9)) + 1;
  const Vec3 centroid = scene.centroid_world();

  std::vector<SessionRecord> records;
  records.reserve(static_cast<std::size_t>(ticks));
  SessionState state;
  JointState q = q0;
  std::size_t next_event = 0;

  for (int k = 0; k < ticks; ++k) {
    const double t = k * dt;
    std::optional<TriggerEvent> event;
    if (next_event < events.size() && events[next_event].t <= t + 1e-9) event = events[next_event++];

    std::vector<PartMask> masks;
    try {
      masks = render_part_masks(env.intrinsics, compose(hand_pose, forward_kinematics(env.params, q)),
                                scene);
    } catch (const NothingVisible&) {
      masks.clear();
    }

    const TickInput input{masks, q, hand_pose, centroid};
    const StepOutput out = step(state, event, input, env);
    state = out.state;
    records.push_back({k, t, event ? std::optional(event->kind) : std::nullopt, state.phase,
                       out.command, out.notice, q});

    if (out.command.kind == CommandKind::ServoVelocity ||
        out.command.kind == CommandKind::RotationVelocity) {
      q = integrate_joints(env.params, q, out.command.velocity, dt).q;
    }
  }
  return records;
}

}  // namespace wristservo
