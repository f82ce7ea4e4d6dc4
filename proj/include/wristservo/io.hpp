#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wristservo/annotation.hpp"
#include "wristservo/bench.hpp"
#include "wristservo/pipeline.hpp"

namespace wristservo::io {

using nlohmann::json;

/// Fixed-precision text for CSV cells; identical across runs and platforms.
std::string format_number(double v);

json to_json(const Pose& p);
Pose pose_from_json(const json& j);

json to_json(const WristParams& p);  // angles in degrees
void update_from_json(WristParams& p, const json& j);

json to_json(const CameraIntrinsics& c);
void update_from_json(CameraIntrinsics& c, const json& j);

json to_json(const ControllerConfig& c);
void update_from_json(ControllerConfig& c, const json& j);

json to_json(const HemisphereSampler& s);
void update_from_json(HemisphereSampler& s, const json& j);

json to_json(const EpisodeOptions& o);
void update_from_json(EpisodeOptions& o, const json& j);

/// {"wrist":..., "camera":..., "controller":..., "sampler":..., "episode":..., "workers": n};
/// every section and field optional, unknown keys rejected.
json to_json(const BenchConfig& c);
void update_from_json(BenchConfig& c, const json& j);
BenchConfig load_bench_config(const std::filesystem::path& path);

/// {"parts": [{"label": "TopGrasp", "vertices": [[x,y,z]...], "triangles": [[i,j,k]...]}], "pose": Pose?}
json to_json(const SceneObject& s);
SceneObject scene_from_json(const json& j);
SceneObject load_scene(const std::filesystem::path& path);

/// {"label", "part_index", "pixel_count", "centroid", "mean_depth", "runs": [[v, u, length]...]}
json to_json(const PartMask& m);
PartMask mask_from_json(const json& j);

json to_json(const EpisodeResult& r, bool with_trajectory = false);

/// iteration,q_wfe,q_wps,x,y,error_norm (angles in degrees)
void write_trace_csv(std::ostream& os, const EpisodeResult& r);

/// episode,controller,iterations,converged,natural,final_error,flipped
void write_comparison_csv(std::ostream& os, const ComparisonReport& r);
json to_json(const ComparisonReport& r);
/// Human-readable summary with the published reference row.
void write_comparison_summary(std::ostream& os, const ComparisonReport& r);

json to_json(const Fig3Report& r);
void write_fig3_summary(std::ostream& os, const Fig3Report& r);
/// controller,wfe0_deg plus the trace columns.
void write_fig3_traces_csv(std::ostream& os, const Fig3Report& r);

json to_json(const Viewpoint& v);

/// One {"t": seconds, "event": "ArmRaised"} object per line; blank lines skipped.
std::vector<TriggerEvent> read_events(std::istream& is);
json to_json(const SessionRecord& r);

/// Rejects files without an explicit "convention".
AnnotationInput annotation_input_from_json(const json& j);
AnnotationInput load_annotation_input(const std::filesystem::path& path);
json to_json(const FrameAnnotation& f);
/// frame_XXXXXX.json per frame plus manifest.json.
void write_annotation(const std::filesystem::path& dir, const AnnotationInput& input,
                      const std::vector<FrameAnnotation>& frames);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wristservo::io
