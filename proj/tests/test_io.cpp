#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "support.hpp"
#include "wristservo/errors.hpp"
#include "wristservo/io.hpp"
#include "wristservo/render.hpp"

using namespace wristservo;
using nlohmann::json;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Io, FormatNumber) {
  EXPECT_EQ(io::format_number(0.0), "0");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1.5), "1.5");
  EXPECT_EQ(io::format_number(213.5), "213.5");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.3333333333");
}

TEST(Io, PoseRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Pose p = testing_support::random_pose(rng);
    const Pose q = io::pose_from_json(json::parse(io::to_json(p).dump()));
    EXPECT_TRUE(q.is_approx(p, 1e-15));
  }
}

TEST(Io, PoseRejectsMalformed) {
  EXPECT_THROW(io::pose_from_json(json::parse(R"({"rotation": [1, 0, 0], "translation": [0, 0, 0]})")),
               FormatError);
  EXPECT_THROW(io::pose_from_json(json::parse(R"({"translation": [0, 0, 0]})")), FormatError);
}

TEST(Io, BenchConfigRoundTrip) {
  BenchConfig a;
  a.controller.lambda = 0.7;
  a.sampler.seed = 99;
  a.sampler.radius_min = 0.25;
  a.params.camera_tilt = deg2rad(12.0);
  a.workers = 2;
  const json ja = io::to_json(a);
  BenchConfig b;
  io::update_from_json(b, json::parse(ja.dump()));
  EXPECT_EQ(io::to_json(b), ja);
  EXPECT_NEAR(b.params.camera_tilt, deg2rad(12.0), 1e-12);
  EXPECT_EQ(b.sampler.seed, 99u);
}

TEST(Io, BenchConfigRejectsUnknownKeys) {
  BenchConfig c;
  EXPECT_THROW(io::update_from_json(c, json::parse(R"({"controler": {}})")), FormatError);
  EXPECT_THROW(io::update_from_json(c, json::parse(R"({"controller": {"lamda": 1}})")), FormatError);
  EXPECT_NO_THROW(io::update_from_json(c, json::parse(R"({"controller": {"lambda": 1}})")));
}

TEST(Io, SceneRoundTrip) {
  const SceneObject a = make_bottle(Pose(rot_z(0.3), Vec3(0.1, 0.2, 0.0)));
  const SceneObject b = io::scene_from_json(json::parse(io::to_json(a).dump()));
  ASSERT_EQ(a.parts.size(), b.parts.size());
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    EXPECT_EQ(a.parts[i].label, b.parts[i].label);
    EXPECT_EQ(a.parts[i].mesh.vertices, b.parts[i].mesh.vertices);
    EXPECT_EQ(a.parts[i].mesh.triangles, b.parts[i].mesh.triangles);
  }
  EXPECT_TRUE(b.pose.is_approx(a.pose, 1e-15));
}

TEST(Io, SceneWithoutPartsIsMissingMesh) {
  EXPECT_THROW(io::scene_from_json(json::parse(R"({"parts": []})")), MeshMissing);
  EXPECT_THROW(io::scene_from_json(json::parse(R"({"parts": [{"label": "Handle", "vertices": [], "triangles": []}]})")),
               FormatError);
}

TEST(Io, MaskRunLengthRoundTrip) {
  const SceneObject obj = make_bottle();
  const Pose cam = look_at_camera(obj.centroid_world() + Vec3(0.3, 0.1, 0.1), obj.centroid_world());
  const auto masks = render_part_masks(CameraIntrinsics{}, cam, obj);
  ASSERT_FALSE(masks.empty());
  for (const PartMask& m : masks) {
    const PartMask r = io::mask_from_json(json::parse(io::to_json(m).dump()));
    EXPECT_EQ(r.label, m.label);
    EXPECT_EQ(r.pixels, m.pixels);
  }
}

TEST(Io, EventsParsing) {
  std::istringstream is(
      "{\"t\": 0.0, \"event\": \"ArmRaised\"}\n\n"
      "{\"t\": 2.5, \"event\": \"EmgRotationTrigger\"}\n"
      "{\"t\": 4, \"event\": \"ArmLowered\"}\n");
  const auto ev = io::read_events(is);
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev[1].kind, EventKind::EmgRotationTrigger);
  EXPECT_DOUBLE_EQ(ev[1].t, 2.5);
  EXPECT_EQ(ev[2].kind, EventKind::ArmLowered);

  std::istringstream bad_kind("{\"t\": 0, \"event\": \"Wave\"}\n");
  EXPECT_THROW(io::read_events(bad_kind), FormatError);
  std::istringstream bad_json("{\"t\": 0,\n");
  EXPECT_THROW(io::read_events(bad_json), FormatError);
  std::istringstream missing("{\"event\": \"ArmRaised\"}\n");
  EXPECT_THROW(io::read_events(missing), FormatError);
}

TEST(Io, AnnotationInputNeedsConvention) {
  const json pose = io::to_json(Pose::identity());
  json j = {{"initial_pose", pose}, {"displacements", json::array({{{"frame", 2}, {"pose", pose}}})}};
  EXPECT_THROW(io::annotation_input_from_json(j), FormatError);
  j["convention"] = "T_sideways";
  EXPECT_THROW(io::annotation_input_from_json(j), FormatError);
  j["convention"] = "T_next_to_prev";
  j["discarded"] = {2};
  j["gap_policy"] = "break_chain";
  const AnnotationInput in = io::annotation_input_from_json(j);
  EXPECT_EQ(in.convention, DisplacementConvention::NextToPrev);
  EXPECT_EQ(in.gap_policy, GapPolicy::BreakChain);
  EXPECT_EQ(in.discarded, std::vector<int>{2});
  ASSERT_EQ(in.displacements.size(), 1u);
  EXPECT_EQ(in.displacements[0].frame, 2);
}

TEST(Io, AnnotationOutputFlagsGaps) {
  const SceneObject obj = make_bottle();
  AnnotationInput in;
  in.initial_pose = compose(inverse(look_at_camera(obj.centroid_world() + Vec3(0.3, 0, 0.1), obj.centroid_world())),
                            obj.pose);
  for (int k = 2; k <= 4; ++k) in.displacements.push_back({k, Pose::identity()});
  in.discarded = {3};
  const CameraIntrinsics k = CameraIntrinsics{}.scaled_to(160, 120);
  const auto frames = annotate_sequence(in, k, obj);
  const auto dir = std::filesystem::temp_directory_path() / "wristservo_io_test";
  std::filesystem::remove_all(dir);
  io::write_annotation(dir, in, frames);
  EXPECT_TRUE(std::filesystem::exists(dir / "frame_000001.json"));
  EXPECT_FALSE(std::filesystem::exists(dir / "frame_000003.json"));
  const json m = io::read_json_file(dir / "manifest.json");
  EXPECT_EQ(m.at("convention"), "T_prev_to_next");
  EXPECT_EQ(m.at("has_gaps"), true);
  EXPECT_EQ(m.at("gaps"), json::array({3}));
  EXPECT_EQ(m.at("frames").size(), 3u);
  const json f1 = io::read_json_file(dir / "frame_000001.json");
  EXPECT_TRUE(io::pose_from_json(f1.at("pose")).is_approx(in.initial_pose, 1e-15));
  std::filesystem::remove_all(dir);
}

TEST(Io, CsvHeaders) {
  EpisodeResult r;
  r.trajectory.push_back({});
  std::ostringstream trace;
  io::write_trace_csv(trace, r);
  EXPECT_EQ(first_line(trace.str()), "iteration,q_wfe,q_wps,x,y,error_norm");

  ComparisonReport rep;
  EpisodeRow row;
  row.iterations = 12;
  row.converged = true;
  rep.rows.push_back(row);
  std::ostringstream cmp;
  io::write_comparison_csv(cmp, rep);
  EXPECT_EQ(first_line(cmp.str()), "episode,controller,iterations,converged,natural,final_error,flipped");
  EXPECT_NE(cmp.str().find("\n0,s-IBVS,12,1,0,0,0"), std::string::npos) << cmp.str();
}

TEST(Io, SummaryCarriesReferenceRow) {
  std::ostringstream os;
  io::write_comparison_summary(os, ComparisonReport{});
  EXPECT_NE(os.str().find("213.5 +- 124.9 natural 13/20"), std::string::npos);
  EXPECT_NE(os.str().find("361.7 +- 70.5 natural 20/20"), std::string::npos);
}
