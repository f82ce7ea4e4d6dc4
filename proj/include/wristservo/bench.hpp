#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wristservo/episode.hpp"
#include "wristservo/sampling.hpp"

namespace wristservo {

/// Everything a bench run depends on.
struct BenchConfig {
  WristParams params = WristParams::hannes();
  CameraIntrinsics intrinsics;
  ControllerConfig controller;
  EpisodeOptions episode;
  HemisphereSampler sampler = comparison_sampler();
  /// Replace sampler.center by the object centroid.
  bool center_on_object = true;
  /// 0 = hardware concurrency.
  int workers = 0;

  HemisphereSampler effective_sampler(const SceneObject& scene) const;

  /// The 20-point protocol: one thin shell at 0.35 m around the object.
  static HemisphereSampler comparison_sampler();
};

struct EpisodeRow {
  int episode = 0;
  ControllerKind controller = ControllerKind::StandardIbvs;
  int iterations = 0;
  bool converged = false;
  bool natural = false;
  /// Final WPS more than 90 deg away from neutral (the hand ended palm-up).
  bool flipped = false;
  double final_error = 0.0;
  JointState q0;
  JointState q_final;
};

struct ControllerStats {
  ControllerKind controller = ControllerKind::StandardIbvs;
  int total = 0;
  double mean_iterations = 0.0;
  /// Sample standard deviation (n - 1).
  double std_iterations = 0.0;
  int natural = 0;
  int converged = 0;
  int flipped = 0;
};

struct ComparisonReport {
  std::uint64_t seed = 0;
  int n_points = 0;
  /// Viewpoints dropped and replaced (sampling or episode start failures).
  int rejected = 0;
  /// s-IBVS then pp-IBVS.
  std::array<ControllerStats, 2> stats;
  /// Ordered by episode, s-IBVS before pp-IBVS within an episode.
  std::vector<EpisodeRow> rows;
};

ControllerStats summarize(ControllerKind controller, const std::vector<EpisodeRow>& rows);

/// Both controllers from identical initial conditions at `n_points` viewpoints.
/// Results do not depend on the worker count.
ComparisonReport run_comparison(int n_points, const SceneObject& scene, const BenchConfig& config);

struct Fig3Setup {
  /// Camera-to-object-centroid distance at q = 0.
  double distance = 0.35;
  /// Elevation of the viewing direction above the horizontal.
  double elevation = 0.0;
  /// The camera at q = 0 looks this far to the side of the object (world
  /// horizontal, perpendicular to the viewing direction).
  double lateral_offset = 0.06;
  /// Same, along world +z.
  double vertical_offset = -0.15;
  std::array<JointState, 2> initial = {JointState{deg2rad(10.0), 0.0},
                                       JointState{deg2rad(-20.0), 0.0}};
};

struct Fig3Trace {
  ControllerKind controller = ControllerKind::StandardIbvs;
  JointState q0;
  EpisodeResult result;
  /// Sign of the first WPS command: -1, 0 or +1.
  int first_wps_sign = 0;
};

struct Fig3Report {
  Pose hand_pose;
  /// s-IBVS (flexed, extended), pp-IBVS (flexed, extended).
  std::array<Fig3Trace, 4> traces;

  bool pp_signs_match() const { return traces[2].first_wps_sign == traces[3].first_wps_sign; }
  bool s_signs_match() const { return traces[0].first_wps_sign == traces[1].first_wps_sign; }
};

/// Forearm pose for the two-configuration scenario.
Pose fig3_hand_pose(const SceneObject& scene, const WristParams& params, const Fig3Setup& setup);

Fig3Report run_fig3_scenario(const SceneObject& scene, const BenchConfig& config,
                             const Fig3Setup& setup = {});

int sign_of(double v, double zero_tol = 1e-12);

}  // namespace wristservo
