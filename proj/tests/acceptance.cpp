// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// usage: acceptance <path-to-wristservo-cli> [work-dir]

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "wristservo/annotation.hpp"
#include "wristservo/bench.hpp"
#include "wristservo/pipeline.hpp"
#include "wristservo/render.hpp"
#include "wristservo/sampling.hpp"
#include "wristservo/servo.hpp"

namespace fs = std::filesystem;
using namespace wristservo;
using namespace testing_support;
using nlohmann::json;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string cli;

int run_cli(const std::string& args, const fs::path& out, double* seconds = nullptr) {
  fs::create_directories(out);
  const std::string cmd = "\"" + cli + "\" --out \"" + out.string() + "\" " + args + " > \"" +
                          (out / "stdout.txt").string() + "\" 2> \"" + (out / "stderr.txt").string() + "\"";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  if (seconds) *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// ---- 1, 2: comparison protocol -------------------------------------------

void comparison(const fs::path& work) {
  double secs = 0;
  const fs::path dir = work / "compare_a";
  const int rc = run_cli("--seed 7 --format json bench compare --n 20", dir, &secs);
  if (rc != 0 || !fs::exists(dir / "comparison.json")) {
    report(1, false, "bench compare failed to run");
    report(2, false, "bench compare failed to run");
    return;
  }
  const json j = json::parse(slurp(dir / "comparison.json"));
  const json& s = j.at("stats").at(0);
  const json& pp = j.at("stats").at(1);
  const int s_nat = s.at("natural"), pp_nat = pp.at("natural");
  const int s_tot = s.at("total"), pp_tot = pp.at("total");
  const json& ref = j.at("reference");
  const bool ref_ok = ref.at("s-IBVS").at("mean") == 213.5 && ref.at("s-IBVS").at("std") == 124.9 &&
                      ref.at("s-IBVS").at("natural") == "13/20" && ref.at("pp-IBVS").at("mean") == 361.7 &&
                      ref.at("pp-IBVS").at("std") == 70.5 && ref.at("pp-IBVS").at("natural") == "20/20";
  report(1, secs < 60.0 && pp_tot == 20 && s_tot == 20 && pp_nat == 20 && s_nat <= pp_nat && ref_ok,
         fmt("%.1f s; natural s-IBVS %d/%d, pp-IBVS %d/%d (reference 13/20, 20/20); s-IBVS flipped %d/%d",
             secs, s_nat, s_tot, pp_nat, pp_tot, s.at("flipped").get<int>(), s_tot));

  const double s_mean = s.at("mean_iterations"), pp_mean = pp.at("mean_iterations");
  const int s_conv = s.at("converged"), pp_conv = pp.at("converged");
  report(2, s_mean < pp_mean && s_conv == s_tot && pp_conv == pp_tot && s_tot > 0,
         fmt("iterations s-IBVS %.1f +- %.1f, pp-IBVS %.1f +- %.1f (reference 213.5 +- 124.9, 361.7 +- 70.5); "
             "converged %d/%d, %d/%d",
             s_mean, s.at("std_iterations").get<double>(), pp_mean, pp.at("std_iterations").get<double>(), s_conv,
             s_tot, pp_conv, pp_tot));
}

// ---- 3: two-configuration scenario ----------------------------------------

void fig3(const fs::path& work) {
  const fs::path dir = work / "fig3_a";
  if (run_cli("--format json bench fig3", dir) != 0 || !fs::exists(dir / "fig3.json")) {
    report(3, false, "bench fig3 failed to run");
    return;
  }
  const json j = json::parse(slurp(dir / "fig3.json"));
  const json& t = j.at("traces");
  const int s10 = t.at(0).at("first_wps_sign"), s20 = t.at(1).at("first_wps_sign");
  const int p10 = t.at(2).at("first_wps_sign"), p20 = t.at(3).at("first_wps_sign");
  report(3, p10 == p20 && p10 != 0,
         fmt("first WPS sign at 10 deg flexion / 20 deg extension: pp-IBVS (%+d, %+d), s-IBVS (%+d, %+d)", p10, p20,
             s10, s20));
}

// ---- 4: interaction matrix vs reprojection --------------------------------

void interaction() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, ratio_lo = 1e9, ratio_hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FeaturePoint f{0.5 * u(rng), 0.4 * u(rng), 0.3 + 0.2 * std::abs(u(rng))};
    const Vec3 p(f.x * f.depth, f.y * f.depth, f.depth);
    Vec6 v;
    for (int k = 0; k < 6; ++k) v(k) = u(rng);
    auto moved = [&](double d) {
      const Mat3 r = angle_axis(v.tail<3>(), d * v.tail<3>().norm());
      const Vec3 pc = r.transpose() * (p - d * v.head<3>());
      return Vec2(pc.x() / pc.z(), pc.y() / pc.z());
    };
    const Eigen::Vector2d lv = interaction_matrix_point(f) * v;
    const double deltas[3] = {1e-3, 1e-4, 1e-5};
    double err[3];
    for (int k = 0; k < 3; ++k) {
      const double d = deltas[k];
      err[k] = (moved(d) - f.xy() - lv * d).norm() / (lv * d).norm();
    }
    worst = std::max(worst, err[2]);
    for (int k = 0; k < 2; ++k) {
      ratio_lo = std::min(ratio_lo, err[k] / err[k + 1]);
      ratio_hi = std::max(ratio_hi, err[k] / err[k + 1]);
    }
  }
  // absolute error O(delta^2) <=> relative error shrinks 10x per decade
  report(4, worst < 1e-3 && ratio_lo > 8.0 && ratio_hi < 12.0,
         fmt("max rel err at 1e-5: %.2e; per-decade error ratio in [%.2f, %.2f]", worst, ratio_lo, ratio_hi));
}

// ---- 5: joint Jacobian vs finite differences -------------------------------

void jacobian() {
  WristParams p = WristParams::hannes();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> fe(p.wfe_limits.min, p.wfe_limits.max);
  std::uniform_real_distribution<double> ps(p.wps_limits.min, p.wps_limits.max);
  p.enforce_limits = false;
  auto effector = [&](const JointState& q) { return compose(forward_kinematics(p, q), inverse(camera_mount(p))); };
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const JointState q{fe(rng), ps(rng)};
    const JointJacobian jac = joint_jacobian(p, q);
    const Eigen::Matrix4d e_inv = homogeneous(inverse(effector(q)));
    for (int c = 0; c < 2; ++c) {
      JointState qp = q, qm = q;
      (c == 0 ? qp.wfe : qp.wps) += h;
      (c == 0 ? qm.wfe : qm.wps) -= h;
      const Eigen::Matrix4d d = e_inv * (homogeneous(effector(qp)) - homogeneous(effector(qm))) / (2 * h);
      Vec6 fd;
      fd << d.topRightCorner<3, 1>(), vee(d.topLeftCorner<3, 3>());
      worst = std::max(worst, (fd - jac.col(c)).cwiseAbs().maxCoeff());
    }
  }
  report(5, worst < 1e-6, fmt("max abs error over 100 configurations: %.2e", worst));
}

// ---- 6: s-IBVS step vs independently assembled law -------------------------

void assembly() {
  const WristParams p = WristParams::hannes();
  const ControllerConfig cfg;
  const Mat3 r_ce = angle_axis(Vec3::UnitX(), -p.camera_tilt).transpose();
  const Vec3 t_ce = -r_ce * p.camera_offset;
  Mat6 cve = Mat6::Zero();
  cve.topLeftCorner<3, 3>() = r_ce;
  cve.topRightCorner<3, 3>() = skew(t_ce) * r_ce;
  cve.bottomRightCorner<3, 3>() = r_ce;

  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> fe(p.wfe_limits.min, p.wfe_limits.max);
  std::uniform_real_distribution<double> ps(p.wps_limits.min, p.wps_limits.max);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = 0.4 * u(rng), y = 0.4 * u(rng), z = 0.25 + 0.2 * std::abs(u(rng));
    const JointState q{fe(rng), ps(rng)};
    Eigen::Matrix<double, 2, 6> l;
    l << -1 / z, 0, x / z, x * y, -(1 + x * x), y, 0, -1 / z, y / z, 1 + y * y, -x * y, -x;
    const Mat3 r_be = angle_axis(Vec3::UnitZ(), q.wps) * angle_axis(-Vec3::UnitX(), q.wfe);
    Eigen::Matrix<double, 6, 2> j = Eigen::Matrix<double, 6, 2>::Zero();
    j.block<3, 1>(3, 0) = -Vec3::UnitX();
    j.block<3, 1>(3, 1) = r_be.transpose() * Vec3::UnitZ();
    const Eigen::Matrix2d a = l * cve * j;
    const Eigen::Vector2d oracle = -cfg.lambda * a.completeOrthogonalDecomposition().pseudoInverse() * Eigen::Vector2d(x, y);
    const JointVelocity v = sibvs_step({x, y, z}, center_feature(), q, p, cfg);
    worst = std::max({worst, std::abs(v.wfe - oracle(0)), std::abs(v.wps - oracle(1))});
  }
  report(6, worst < 1e-8, fmt("max abs difference over 50 states: %.2e", worst));
}

// ---- 7: annotation closed loop ---------------------------------------------

void annotation() {
  const SceneObject obj = make_bottle(Pose(rot_z(0.4), Vec3(0.1, -0.2, 0.0)));
  const CameraIntrinsics k;
  const Vec3 c = obj.centroid_world();
  std::vector<Pose> truth;
  for (int f = 0; f < 50; ++f) {
    const double a = deg2rad(3.0) * f;
    const Vec3 eye = c + Vec3(0.35 * std::cos(a), 0.35 * std::sin(a), 0.10 + 0.002 * f);
    truth.push_back(compose(inverse(look_at_camera(eye, c, deg2rad(0.5) * f)), obj.pose));
  }
  AnnotationInput in;
  in.initial_pose = truth[0];
  for (int f = 1; f < 50; ++f) in.displacements.push_back({f + 1, compose(truth[f - 1], inverse(truth[f]))});
  const auto frames = annotate_sequence(in, k, obj);

  double pose_err = 0.0;
  int mask_mismatch = 0;
  bool shape_ok = frames.size() == 50;
  for (std::size_t i = 0; shape_ok && i < frames.size(); ++i) {
    pose_err = std::max(pose_err, (homogeneous(frames[i].pose) - homogeneous(truth[i])).cwiseAbs().maxCoeff());
    const auto direct = render_part_masks_from(k, truth[i], obj);
    if (direct.size() != frames[i].masks.size()) {
      ++mask_mismatch;
      continue;
    }
    for (std::size_t m = 0; m < direct.size(); ++m) {
      if (direct[m].label != frames[i].masks[m].label || direct[m].pixels != frames[i].masks[m].pixels) ++mask_mismatch;
    }
  }

  std::mt19937_64 rng(707);
  AnnotationInput chain;
  chain.initial_pose = random_pose(rng);
  for (int f = 2; f <= 1001; ++f) chain.displacements.push_back({f, random_pose(rng, 0.01)});
  double drift = 0.0;
  for (const FramePose& fp : chain_sequence(chain)) drift = std::max(drift, fp.pose.orthonormality_error());

  report(7, shape_ok && pose_err < 1e-8 && mask_mismatch == 0 && drift < 1e-8,
         fmt("50 frames: max pose error %.2e, mask mismatches %d; 1000-step orthonormality drift %.2e", pose_err,
             mask_mismatch, drift));
}

// ---- 8: hemisphere uniformity ---------------------------------------------

void hemisphere() {
  HemisphereSampler s;
  s.radius_bins = 1;
  s.points_per_bin = 10000;
  s.seed = 808;
  std::vector<double> z;
  for (const HemispherePoint& p : sample_hemisphere_points(s)) z.push_back(p.direction.z());
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) d = std::max({d, (i + 1) / n - z[i], z[i] - i / n});

  HemisphereSampler binned;  // 6 bins x 400 over 0.2-1 m
  binned.seed = 809;
  std::vector<int> count(binned.radius_bins, 0);
  for (const HemispherePoint& p : sample_hemisphere_points(binned)) ++count[p.bin];
  const bool quota = std::all_of(count.begin(), count.end(), [&](int c) { return c == binned.points_per_bin; });
  report(8, z.size() == 10000 && d < 0.02 && quota,
         fmt("KS statistic %.4f over %zu directions; bins hold %d/%d/%d/%d/%d/%d (quota %d)", d, z.size(), count[0],
             count[1], count[2], count[3], count[4], count[5], binned.points_per_bin));
}

// ---- 9: pipeline replay ---------------------------------------------------

void pipeline() {
  PipelineEnvironment env;
  SceneObject jar;
  jar.parts.push_back({PartLabel::SideGrasp, make_cylinder({0, 0, 0}, 0.03, 0.08, 32)});
  jar.parts.push_back({PartLabel::TopGrasp, make_cylinder({0, 0, 0.08}, 0.045, 0.02, 32)});
  const Vec3 c = jar.centroid_world();
  const Pose hand = compose(look_at_camera(c + Vec3(0.06, 0.02, 0.33), c + Vec3(0.03, 0.0, 0.0)),
                            inverse(forward_kinematics(env.params, {})));
  const std::vector<TriggerEvent> events{{EventKind::ArmRaised, 0.1},
                                         {EventKind::EmgRotationTrigger, 3.0},
                                         {EventKind::EmgClose, 6.0},
                                         {EventKind::EmgOpen, 6.5},
                                         {EventKind::ArmLowered, 7.0}};
  const auto records = run_session(events, jar, hand, {deg2rad(8.0), deg2rad(-10.0)}, env, 8.0);

  std::vector<Phase> phases;
  bool triggered = false;
  int servo_after = 0;
  std::optional<GraspPlan> plan;
  std::optional<JointState> at_grasp;
  for (const SessionRecord& r : records) {
    if (phases.empty() || phases.back() != r.phase) phases.push_back(r.phase);
    if (r.command.kind == CommandKind::GraspPlan) {
      triggered = true;
      plan = r.command.plan;
    } else if (triggered && r.command.kind == CommandKind::ServoVelocity) {
      ++servo_after;
    }
    if (!at_grasp && r.phase == Phase::Grasping) at_grasp = r.q;
  }
  const bool cycle =
      phases == std::vector<Phase>{Phase::Idle, Phase::Transport, Phase::Rotation, Phase::Grasping, Phase::Idle};
  const bool top = plan && plan->selected_label == PartLabel::TopGrasp;

  // grid-search reference for the best reachable palm-down alignment
  const Vec3 down_base = hand.rotation().transpose() * Vec3(0, 0, -1);
  double best = kPi;
  const WristParams& p = env.params;
  for (double fe = p.wfe_limits.min; fe <= p.wfe_limits.max + 1e-12; fe += deg2rad(0.25))
    for (double ps = p.wps_limits.min; ps <= p.wps_limits.max + 1e-12; ps += deg2rad(0.25)) {
      const Vec3 n = angle_axis(Vec3::UnitZ(), ps) * angle_axis(-Vec3::UnitX(), fe) * p.palm_normal_local;
      best = std::min(best, std::acos(std::clamp(n.dot(down_base), -1.0, 1.0)));
    }
  double planned = kPi, achieved = kPi;
  if (plan) planned = std::acos(std::clamp(palm_normal_world(p, plan->target_joints).dot(down_base), -1.0, 1.0));
  if (at_grasp) achieved = std::acos(std::clamp(palm_normal_world(p, *at_grasp).dot(down_base), -1.0, 1.0));

  report(9,
         cycle && servo_after == 0 && top && planned <= best + 1e-6 && achieved < deg2rad(10.0),
         fmt("phase cycle %s; servo commands after trigger %d; selected %s; palm vs -z: planned %.2f deg "
             "(grid best %.2f), at grasp %.2f deg",
             cycle ? "ok" : "wrong", servo_after, top ? "TopGrasp" : "other", rad2deg(planned), rad2deg(best),
             rad2deg(achieved)));
}

// ---- 10: determinism ------------------------------------------------------

void determinism(const fs::path& work) {
  struct Cmd {
    std::string args, a, b;
  };
  const std::vector<Cmd> cmds = {
      {"--seed 7 --format json bench compare --n 20", "compare_a", "compare_b"},
      {"--format json bench fig3", "fig3_a", "fig3_b"},
      {"--format csv bench fig3", "fig3_csv_a", "fig3_csv_b"},
      {"--seed 11 --format csv gen-viewpoints", "vp_a", "vp_b"},
      {"--seed 11 --format json gen-viewpoints", "vp_json_a", "vp_json_b"},
  };
  int files = 0, differing = 0;
  bool ran = true;
  for (const Cmd& c : cmds) {
    if (!fs::exists(work / c.a)) ran &= run_cli(c.args, work / c.a) == 0;
    ran &= run_cli(c.args, work / c.b) == 0;
    for (const auto& e : fs::directory_iterator(work / c.a)) {
      const std::string name = e.path().filename().string();
      if (name == "stderr.txt") continue;  // wall-clock timing
      ++files;
      if (!fs::exists(work / c.b / name) || slurp(e.path()) != slurp(work / c.b / name)) {
        ++differing;
        std::printf("  differs: %s/%s\n", c.a.c_str(), name.c_str());
      }
    }
  }
  report(10, ran && files > 0 && differing == 0, fmt("%d output files compared across repeated runs, %d differ", files, differing));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <wristservo-cli> [work-dir]\n", argv[0]);
    return 2;
  }
  cli = argv[1];
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "wristservo_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  auto guarded = [](int n, auto fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(n, false, std::string("exception: ") + e.what());
    }
  };
  guarded(1, [&] { comparison(work); });
  guarded(3, [&] { fig3(work); });
  guarded(4, interaction);
  guarded(5, jacobian);
  guarded(6, assembly);
  guarded(7, annotation);
  guarded(8, hemisphere);
  guarded(9, pipeline);
  guarded(10, [&] { determinism(work); });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
