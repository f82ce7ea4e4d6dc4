#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "wristservo/bench.hpp"
#include "wristservo/errors.hpp"

using namespace wristservo;

namespace {

// One-sample Kolmogorov–Smirnov statistic against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

HemisphereSampler big_sampler() {
  HemisphereSampler s;
  s.radius_bins = 1;
  s.points_per_bin = 10000;
  s.seed = 2024;
  return s;
}

}  // namespace

TEST(Sampling, DirectionsAreAreaUniform) {
  const auto pts = sample_hemisphere_points(big_sampler());
  ASSERT_EQ(pts.size(), 10000u);
  std::vector<double> z, az;
  for (const HemispherePoint& p : pts) {
    EXPECT_NEAR(p.direction.norm(), 1.0, 1e-12);
    EXPECT_GE(p.direction.z(), 0.0);
    z.push_back(p.direction.z());
    az.push_back(std::atan2(p.direction.y(), p.direction.x()));
  }
  // uniform on the hemisphere: cos(polar) ~ U[0,1], azimuth ~ U[-pi,pi]
  EXPECT_LT(ks_statistic(z, [](double x) { return x; }), 0.02);
  EXPECT_LT(ks_statistic(az, [](double x) { return (x + kPi) / (2 * kPi); }), 0.02);
}

TEST(Sampling, RadiusBinsAndRoll) {
  HemisphereSampler s;
  s.points_per_bin = 400;
  s.seed = 5;
  const auto pts = sample_hemisphere_points(s);
  ASSERT_EQ(pts.size(), 2400u);
  std::vector<int> count(6, 0);
  const double w = (s.radius_max - s.radius_min) / s.radius_bins;
  for (const HemispherePoint& p : pts) {
    ASSERT_GE(p.bin, 0);
    ASSERT_LT(p.bin, 6);
    ++count[p.bin];
    EXPECT_GE(p.radius, s.radius_min + w * p.bin - 1e-12);
    EXPECT_LE(p.radius, s.radius_min + w * (p.bin + 1) + 1e-12);
    EXPECT_GE(p.roll, 0.0);
    EXPECT_LE(p.roll, deg2rad(90.0));
    EXPECT_LE((p.look_target - s.center).cwiseAbs().maxCoeff(), s.look_jitter + 1e-12);
  }
  for (int c : count) EXPECT_EQ(c, 400);
}

TEST(Sampling, SameSeedSameSequence) {
  HemisphereSampler s;
  s.points_per_bin = 20;
  s.seed = 77;
  const auto a = sample_hemisphere_points(s);
  const auto b = sample_hemisphere_points(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].direction, b[i].direction);
    EXPECT_EQ(a[i].radius, b[i].radius);
    EXPECT_EQ(a[i].roll, b[i].roll);
  }
  s.seed = 78;
  EXPECT_NE(sample_hemisphere_points(s)[0].direction, a[0].direction);
}

TEST(Sampling, TrivialSampler) {
  const SceneObject obj = make_bottle();
  HemisphereSampler s;
  s.center = obj.centroid_world();
  s.radius_min = 0.40;
  s.radius_max = 0.41;
  s.radius_bins = 1;
  s.points_per_bin = 1;
  s.roll_max = 0.0;
  s.look_jitter = 0.0;
  const auto vps = sample_hemisphere(s, obj, WristParams::hannes(), CameraIntrinsics{});
  ASSERT_EQ(vps.size(), 1u);
  const HemispherePoint& p = vps[0].point;
  EXPECT_EQ(p.roll, 0.0);
  EXPECT_EQ(p.look_target, s.center);
  EXPECT_GE(p.radius, 0.40);
  EXPECT_LE(p.radius, 0.41);
  // camera sits at the sampled point, looking at the target with zero roll
  const Vec3 eye = s.center + p.radius * p.direction;
  EXPECT_TRUE(vps[0].camera_pose.is_approx(look_at_camera(eye, s.center, 0.0), 1e-12));
}

TEST(Sampling, InvalidSamplerRejected) {
  HemisphereSampler s;
  s.radius_min = 1.0;
  s.radius_max = 0.2;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = HemisphereSampler{};
  s.radius_bins = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = HemisphereSampler{};
  s.radius_min = s.radius_max = 0.4;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = HemisphereSampler{};
  s.points_per_bin = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(Sampling, ViewpointsKeepObjectInView) {
  const SceneObject obj = make_bottle();
  const WristParams params = WristParams::hannes();
  const CameraIntrinsics k;
  HemisphereSampler s;
  s.center = obj.centroid_world();
  s.radius_min = 0.3;
  s.radius_max = 0.6;
  s.radius_bins = 3;
  s.points_per_bin = 3;
  s.seed = 9;
  const auto vps = sample_hemisphere(s, obj, params, k);
  ASSERT_EQ(vps.size(), 9u);
  std::vector<int> count(3, 0);
  for (const Viewpoint& v : vps) {
    ++count[v.point.bin];
    EXPECT_NO_THROW(check_limits(params, v.q0));
    const Pose cam = compose(v.hand_pose, forward_kinematics(params, v.q0));
    EXPECT_TRUE(object_in_view(k, cam, obj));
  }
  EXPECT_EQ(count, (std::vector<int>{3, 3, 3}));
}

TEST(Bench, SummaryUsesSampleStd) {
  std::vector<EpisodeRow> rows;
  const std::vector<int> its = {10, 20, 30, 60};
  for (std::size_t i = 0; i < its.size(); ++i) {
    EpisodeRow r;
    r.episode = static_cast<int>(i);
    r.controller = ControllerKind::PartitionedIbvs;
    r.iterations = its[i];
    r.converged = true;
    r.natural = i != 2;
    rows.push_back(r);
  }
  EpisodeRow other;
  other.iterations = 1000;
  rows.push_back(other);
  const ControllerStats st = summarize(ControllerKind::PartitionedIbvs, rows);
  EXPECT_EQ(st.total, 4);
  EXPECT_DOUBLE_EQ(st.mean_iterations, 30.0);
  // (400 + 100 + 0 + 900) / 3
  EXPECT_NEAR(st.std_iterations, std::sqrt(1400.0 / 3.0), 1e-12);
  EXPECT_EQ(st.natural, 3);
  EXPECT_EQ(st.converged, 4);
}

TEST(Bench, ComparisonIsIndependentOfWorkers) {
  const SceneObject obj = make_bottle();
  BenchConfig cfg;
  cfg.workers = 1;
  const ComparisonReport a = run_comparison(3, obj, cfg);
  cfg.workers = 3;
  const ComparisonReport b = run_comparison(3, obj, cfg);
  EXPECT_EQ(a.n_points, 3);
  ASSERT_EQ(a.rows.size(), 6u);
  ASSERT_EQ(b.rows.size(), 6u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].episode, b.rows[i].episode);
    EXPECT_EQ(a.rows[i].controller, b.rows[i].controller);
    EXPECT_EQ(a.rows[i].iterations, b.rows[i].iterations);
    EXPECT_EQ(a.rows[i].q_final, b.rows[i].q_final);
  }
  // both controllers start from the same state
  for (std::size_t i = 0; i < a.rows.size(); i += 2) {
    EXPECT_EQ(a.rows[i].controller, ControllerKind::StandardIbvs);
    EXPECT_EQ(a.rows[i + 1].controller, ControllerKind::PartitionedIbvs);
    EXPECT_EQ(a.rows[i].q0, a.rows[i + 1].q0);
  }
  EXPECT_EQ(a.stats[0].total, 3);
  EXPECT_EQ(a.stats[1].total, 3);
}

TEST(Bench, SignOf) {
  EXPECT_EQ(sign_of(0.3), 1);
  EXPECT_EQ(sign_of(-1e-3), -1);
  EXPECT_EQ(sign_of(0.0), 0);
}

TEST(Bench, Fig3PartitionedSignsAgree) {
  const SceneObject obj = make_bottle();
  const Fig3Report r = run_fig3_scenario(obj, BenchConfig{});
  EXPECT_EQ(r.traces[0].q0, r.traces[2].q0);
  EXPECT_EQ(r.traces[1].q0, r.traces[3].q0);
  EXPECT_TRUE(r.pp_signs_match());
  for (const Fig3Trace& t : r.traces) EXPECT_TRUE(t.result.converged);
}
