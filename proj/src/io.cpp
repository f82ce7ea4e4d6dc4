#include "wristservo/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "wristservo/errors.hpp"

namespace wristservo::io {

namespace {

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
}

void check_keys(const json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  require_object(j, what);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw FormatError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void read_deg_if(const json& j, const char* key, double& out_rad) {
  double deg = rad2deg(out_rad);
  read_if(j, key, deg);
  out_rad = deg2rad(deg);
}

PartLabel label_from(const json& j) {
  if (!j.is_string()) throw FormatError("label must be a string");
  const auto l = parse_part_label(j.get<std::string>());
  if (!l) throw FormatError("unknown part label '" + j.get<std::string>() + "'");
  return *l;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec3 vec3_from(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 3) throw FormatError(std::string(what) + ": expected [x, y, z]");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

void read_vec_if(const json& j, const char* key, Vec3& out) {
  if (j.contains(key)) out = vec3_from(j.at(key), key);
}

json limits_deg(const JointLimits& l) { return json::array({rad2deg(l.min), rad2deg(l.max)}); }

void read_limits_if(const json& j, const char* key, JointLimits& out) {
  if (!j.contains(key)) return;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw FormatError(std::string(key) + ": expected [min, max]");
  out = JointLimits{deg2rad(a[0].get<double>()), deg2rad(a[1].get<double>())};
}

json joints_deg(const JointState& q) { return {{"wfe_deg", rad2deg(q.wfe)}, {"wps_deg", rad2deg(q.wps)}}; }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path.string());
  return os;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json to_json(const Pose& p) {
  const Mat3& r = p.rotation();
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({r(i, 0), r(i, 1), r(i, 2)}));
  return {{"rotation", rows}, {"translation", vec_json(p.translation())}};
}

Pose pose_from_json(const json& j) {
  check_keys(j, "pose", {"rotation", "translation"});
  if (!j.contains("rotation") || !j.contains("translation"))
    throw FormatError("pose: needs 'rotation' and 'translation'");
  const json& r = j.at("rotation");
  Mat3 m;
  if (r.is_array() && r.size() == 3 && r[0].is_array()) {
    for (int i = 0; i < 3; ++i) {
      if (r[i].size() != 3) throw FormatError("pose: rotation rows need 3 values");
      for (int k = 0; k < 3; ++k) m(i, k) = r[i][k].get<double>();
    }
  } else if (r.is_array() && r.size() == 9) {
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = r[i].get<double>();
  } else {
    throw FormatError("pose: rotation must be 3x3 rows or 9 row-major values");
  }
  try {
    return Pose(m, vec3_from(j.at("translation"), "pose translation"));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("pose: ") + e.what());
  }
}

json to_json(const WristParams& p) {
  return {{"camera_tilt_deg", rad2deg(p.camera_tilt)},
          {"camera_offset", vec_json(p.camera_offset)},
          {"wfe_limits_deg", limits_deg(p.wfe_limits)},
          {"wps_limits_deg", limits_deg(p.wps_limits)},
          {"palm_normal", vec_json(p.palm_normal_local)},
          {"enforce_limits", p.enforce_limits}};
}

void update_from_json(WristParams& p, const json& j) {
  check_keys(j, "wrist", {"camera_tilt_deg", "camera_offset", "wfe_limits_deg", "wps_limits_deg",
                          "palm_normal", "enforce_limits"});
  read_deg_if(j, "camera_tilt_deg", p.camera_tilt);
  read_vec_if(j, "camera_offset", p.camera_offset);
  read_limits_if(j, "wfe_limits_deg", p.wfe_limits);
  read_limits_if(j, "wps_limits_deg", p.wps_limits);
  read_vec_if(j, "palm_normal", p.palm_normal_local);
  read_if(j, "enforce_limits", p.enforce_limits);
  p.validate();
}

json to_json(const CameraIntrinsics& c) {
  return {{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}, {"width", c.width}, {"height", c.height}};
}

void update_from_json(CameraIntrinsics& c, const json& j) {
  check_keys(j, "camera", {"fx", "fy", "cx", "cy", "width", "height"});
  read_if(j, "fx", c.fx);
  read_if(j, "fy", c.fy);
  read_if(j, "cx", c.cx);
  read_if(j, "cy", c.cy);
  read_if(j, "width", c.width);
  read_if(j, "height", c.height);
  c.validate();
}

json to_json(const ControllerConfig& c) {
  return {{"lambda", c.lambda},
          {"lambda_wps", c.lambda_wps},
          {"convergence_eps", c.convergence_eps},
          {"convergence_hold", c.convergence_hold},
          {"max_iterations", c.max_iterations},
          {"dt", c.dt},
          {"damping", c.damping},
          {"pinv_tolerance", c.pinv_tolerance},
          {"handedness", c.handedness == Handedness::RightArm ? "right" : "left"},
          {"naturalness_threshold_deg", rad2deg(c.naturalness_threshold)}};
}

void update_from_json(ControllerConfig& c, const json& j) {
  check_keys(j, "controller", {"lambda", "lambda_wps", "convergence_eps", "convergence_hold",
                               "max_iterations", "dt", "damping", "pinv_tolerance", "handedness",
                               "naturalness_threshold_deg"});
  read_if(j, "lambda", c.lambda);
  read_if(j, "lambda_wps", c.lambda_wps);
  read_if(j, "convergence_eps", c.convergence_eps);
  read_if(j, "convergence_hold", c.convergence_hold);
  read_if(j, "max_iterations", c.max_iterations);
  read_if(j, "dt", c.dt);
  read_if(j, "damping", c.damping);
  read_if(j, "pinv_tolerance", c.pinv_tolerance);
  if (j.contains("handedness")) {
    const std::string h = j.at("handedness").get<std::string>();
    if (h == "right") c.handedness = Handedness::RightArm;
    else if (h == "left") c.handedness = Handedness::LeftArm;
    else throw FormatError("handedness must be 'right' or 'left'");
  }
  read_deg_if(j, "naturalness_threshold_deg", c.naturalness_threshold);
  c.validate();
}

json to_json(const HemisphereSampler& s) {
  return {{"center", vec_json(s.center)},
          {"radius_min", s.radius_min},
          {"radius_max", s.radius_max},
          {"radius_bins", s.radius_bins},
          {"points_per_bin", s.points_per_bin},
          {"roll_max_deg", rad2deg(s.roll_max)},
          {"look_jitter", s.look_jitter},
          {"max_attempts", s.max_attempts},
          {"seed", s.seed}};
}

void update_from_json(HemisphereSampler& s, const json& j) {
  check_keys(j, "sampler", {"center", "radius_min", "radius_max", "radius_bins", "points_per_bin",
                            "roll_max_deg", "look_jitter", "max_attempts", "seed"});
  read_vec_if(j, "center", s.center);
  read_if(j, "radius_min", s.radius_min);
  read_if(j, "radius_max", s.radius_max);
  read_if(j, "radius_bins", s.radius_bins);
  read_if(j, "points_per_bin", s.points_per_bin);
  read_deg_if(j, "roll_max_deg", s.roll_max);
  read_if(j, "look_jitter", s.look_jitter);
  read_if(j, "max_attempts", s.max_attempts);
  read_if(j, "seed", s.seed);
  s.validate();
}

json to_json(const EpisodeOptions& o) {
  return {{"adjacency_px", o.adjacency_px}, {"use_mask_depth", o.use_mask_depth}, {"constant_depth", o.constant_depth}};
}

void update_from_json(EpisodeOptions& o, const json& j) {
  check_keys(j, "episode", {"adjacency_px", "use_mask_depth", "constant_depth"});
  read_if(j, "adjacency_px", o.adjacency_px);
  read_if(j, "use_mask_depth", o.use_mask_depth);
  read_if(j, "constant_depth", o.constant_depth);
  if (o.adjacency_px < 0.0) throw FormatError("episode.adjacency_px must be >= 0");
  if (!(o.constant_depth > 0.0)) throw FormatError("episode.constant_depth must be > 0");
}

json to_json(const BenchConfig& c) {
  return {{"wrist", to_json(c.params)},         {"camera", to_json(c.intrinsics)},
          {"controller", to_json(c.controller)}, {"sampler", to_json(c.sampler)},
          {"episode", to_json(c.episode)},       {"center_on_object", c.center_on_object},
          {"workers", c.workers}};
}

void update_from_json(BenchConfig& c, const json& j) {
  check_keys(j, "config", {"wrist", "camera", "controller", "sampler", "episode", "center_on_object", "workers"});
  if (j.contains("wrist")) update_from_json(c.params, j.at("wrist"));
  if (j.contains("camera")) update_from_json(c.intrinsics, j.at("camera"));
  if (j.contains("controller")) update_from_json(c.controller, j.at("controller"));
  if (j.contains("sampler")) update_from_json(c.sampler, j.at("sampler"));
  if (j.contains("episode")) update_from_json(c.episode, j.at("episode"));
  read_if(j, "center_on_object", c.center_on_object);
  read_if(j, "workers", c.workers);
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  BenchConfig c;
  update_from_json(c, read_json_file(path));
  return c;
}

json to_json(const SceneObject& s) {
  json parts = json::array();
  for (const ObjectPart& p : s.parts) {
    json verts = json::array();
    for (const Vec3& v : p.mesh.vertices) verts.push_back(vec_json(v));
    json tris = json::array();
    for (const auto& t : p.mesh.triangles) tris.push_back(json::array({t[0], t[1], t[2]}));
    parts.push_back({{"label", std::string(to_string(p.label))}, {"vertices", verts}, {"triangles", tris}});
  }
  return {{"parts", parts}, {"pose", to_json(s.pose)}};
}

SceneObject scene_from_json(const json& j) {
  check_keys(j, "object", {"parts", "pose"});
  if (!j.contains("parts") || !j.at("parts").is_array()) throw MeshMissing("object: no 'parts' array");
  SceneObject s;
  for (const json& pj : j.at("parts")) {
    check_keys(pj, "part", {"label", "vertices", "triangles"});
    ObjectPart part;
    if (!pj.contains("label")) throw FormatError("part: missing 'label'");
    part.label = label_from(pj.at("label"));
    if (!pj.contains("vertices") || !pj.contains("triangles")) throw MeshMissing("part without mesh data");
    for (const json& v : pj.at("vertices")) part.mesh.vertices.push_back(vec3_from(v, "vertex"));
    for (const json& t : pj.at("triangles")) {
      if (!t.is_array() || t.size() != 3) throw FormatError("triangle: expected [i, j, k]");
      part.mesh.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    if (part.mesh.triangles.empty()) throw MeshMissing("part with no triangles");
    s.parts.push_back(std::move(part));
  }
  if (s.parts.empty()) throw MeshMissing("object has no parts");
  if (j.contains("pose")) s.pose = pose_from_json(j.at("pose"));
  s.validate();
  return s;
}

SceneObject load_scene(const std::filesystem::path& path) { return scene_from_json(read_json_file(path)); }

json to_json(const PartMask& m) {
  json runs = json::array();
  for (const PixelRun& r : run_length_encode(m.pixels)) runs.push_back(json::array({r.v, r.u, r.length}));
  return {{"label", std::string(to_string(m.label))},
          {"part_index", m.part_index},
          {"pixel_count", m.pixels.size()},
          {"centroid", vec_json(m.centroid)},
          {"mean_depth", m.mean_depth},
          {"runs", runs}};
}

PartMask mask_from_json(const json& j) {
  check_keys(j, "mask", {"label", "part_index", "pixel_count", "centroid", "mean_depth", "runs"});
  PartMask m;
  m.label = label_from(j.at("label"));
  read_if(j, "part_index", m.part_index);
  read_if(j, "mean_depth", m.mean_depth);
  std::vector<PixelRun> runs;
  for (const json& r : j.at("runs")) runs.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<int>()});
  m.pixels = run_length_decode(runs);
  if (!m.pixels.empty()) m.centroid = mask_centroid(m.pixels);
  return m;
}

json to_json(const EpisodeResult& r, bool with_trajectory) {
  const TrajectoryStep& last = r.trajectory.back();
  json j = {{"controller", std::string(to_string(r.controller))},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"final_error_norm", r.final_error_norm},
            {"natural", r.natural},
            {"saturated", r.saturated},
            {"lost_view", r.lost_view},
            {"first_command", {{"wfe_deg_s", rad2deg(r.first_command.wfe)}, {"wps_deg_s", rad2deg(r.first_command.wps)}}},
            {"q_initial", joints_deg(r.trajectory.front().q)},
            {"q_final", joints_deg(last.q)}};
  if (with_trajectory) {
    json steps = json::array();
    for (const TrajectoryStep& s : r.trajectory) {
      steps.push_back({rad2deg(s.q.wfe), rad2deg(s.q.wps), s.feature.x, s.feature.y, s.error_norm});
    }
    j["trajectory"] = {{"columns", {"q_wfe_deg", "q_wps_deg", "x", "y", "error_norm"}}, {"rows", steps}};
  }
  return j;
}

namespace {

void trace_rows(std::ostream& os, const EpisodeResult& r, const std::string& prefix) {
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    const TrajectoryStep& s = r.trajectory[i];
    os << prefix << i << ',' << format_number(rad2deg(s.q.wfe)) << ',' << format_number(rad2deg(s.q.wps))
       << ',' << format_number(s.feature.x) << ',' << format_number(s.feature.y) << ','
       << format_number(s.error_norm) << '\n';
  }
}

}  // namespace

void write_trace_csv(std::ostream& os, const EpisodeResult& r) {
  os << "iteration,q_wfe,q_wps,x,y,error_norm\n";
  trace_rows(os, r, "");
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& r) {
  os << "episode,controller,iterations,converged,natural,final_error,flipped\n";
  for (const EpisodeRow& row : r.rows) {
    os << row.episode << ',' << to_string(row.controller) << ',' << row.iterations << ','
       << int(row.converged) << ',' << int(row.natural) << ',' << format_number(row.final_error) << ','
       << int(row.flipped) << '\n';
  }
}

namespace {

json stats_json(const ControllerStats& s) {
  return {{"controller", std::string(to_string(s.controller))},
          {"total", s.total},
          {"mean_iterations", s.mean_iterations},
          {"std_iterations", s.std_iterations},
          {"natural", s.natural},
          {"converged", s.converged},
          {"flipped", s.flipped}};
}

}  // namespace

json to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const EpisodeRow& row : r.rows) {
    rows.push_back({{"episode", row.episode},
                    {"controller", std::string(to_string(row.controller))},
                    {"iterations", row.iterations},
                    {"converged", row.converged},
                    {"natural", row.natural},
                    {"flipped", row.flipped},
                    {"final_error", row.final_error},
                    {"q0", joints_deg(row.q0)},
                    {"q_final", joints_deg(row.q_final)}});
  }
  return {{"seed", r.seed},
          {"n_points", r.n_points},
          {"rejected", r.rejected},
          {"stats", json::array({stats_json(r.stats[0]), stats_json(r.stats[1])})},
          {"reference", {{"s-IBVS", {{"mean", 213.5}, {"std", 124.9}, {"natural", "13/20"}}},
                         {"pp-IBVS", {{"mean", 361.7}, {"std", 70.5}, {"natural", "20/20"}}}}},
          {"episodes", rows}};
}

void write_comparison_summary(std::ostream& os, const ComparisonReport& r) {
  char line[160];
  os << "# s-IBVS vs pp-IBVS, " << r.n_points << " viewpoints, seed " << r.seed << '\n';
  os << "# Absolute iteration counts depend on unpublished gains; only the ordering\n"
     << "# (s-IBVS faster) and the naturalness counts are meaningful.\n";
  std::snprintf(line, sizeof line, "%-10s %-22s %-10s %-10s %-8s\n", "method", "iterations", "natural",
                "converged", "flipped");
  os << line;
  for (const ControllerStats& s : r.stats) {
    char it[40], nat[16], conv[16], fl[16];
    std::snprintf(it, sizeof it, "%.1f +- %.1f", s.mean_iterations, s.std_iterations);
    std::snprintf(nat, sizeof nat, "%d/%d", s.natural, s.total);
    std::snprintf(conv, sizeof conv, "%d/%d", s.converged, s.total);
    std::snprintf(fl, sizeof fl, "%d/%d", s.flipped, s.total);
    std::snprintf(line, sizeof line, "%-10s %-22s %-10s %-10s %-8s\n", std::string(to_string(s.controller)).c_str(),
                  it, nat, conv, fl);
    os << line;
  }
  os << "reference  s-IBVS 213.5 +- 124.9 natural 13/20 | pp-IBVS 361.7 +- 70.5 natural 20/20\n";
  if (r.rejected > 0) os << "rejected viewpoints (refilled): " << r.rejected << '\n';
}

json to_json(const Fig3Report& r) {
  json traces = json::array();
  for (const Fig3Trace& t : r.traces) {
    traces.push_back({{"controller", std::string(to_string(t.controller))},
                      {"q0", joints_deg(t.q0)},
                      {"first_wps_sign", t.first_wps_sign},
                      {"result", to_json(t.result)}});
  }
  return {{"hand_pose", to_json(r.hand_pose)},
          {"traces", traces},
          {"pp_signs_match", r.pp_signs_match()},
          {"s_signs_match", r.s_signs_match()}};
}

void write_fig3_summary(std::ostream& os, const Fig3Report& r) {
  for (const Fig3Trace& t : r.traces) {
    char line[160];
    std::snprintf(line, sizeof line, "%-8s wfe0 %+6.1f deg  first WPS sign %+d  iterations %d  converged %d  final q (%.1f, %.1f) deg\n",
                  std::string(to_string(t.controller)).c_str(), rad2deg(t.q0.wfe), t.first_wps_sign,
                  t.result.iterations, int(t.result.converged), rad2deg(t.result.trajectory.back().q.wfe),
                  rad2deg(t.result.trajectory.back().q.wps));
    os << line;
  }
  os << "pp-IBVS first-step WPS signs " << (r.pp_signs_match() ? "match" : "DIFFER") << '\n';
  os << "s-IBVS first-step WPS signs (" << r.traces[0].first_wps_sign << ", " << r.traces[1].first_wps_sign
     << ") " << (r.s_signs_match() ? "match" : "differ") << '\n';
}

void write_fig3_traces_csv(std::ostream& os, const Fig3Report& r) {
  os << "controller,wfe0,iteration,q_wfe,q_wps,x,y,error_norm\n";
  for (const Fig3Trace& t : r.traces) {
    trace_rows(os, t.result, std::string(to_string(t.controller)) + ',' + format_number(rad2deg(t.q0.wfe)) + ',');
  }
}

json to_json(const Viewpoint& v) {
  return {{"index", v.index},
          {"bin", v.point.bin},
          {"radius", v.point.radius},
          {"direction", vec_json(v.point.direction)},
          {"roll_deg", rad2deg(v.point.roll)},
          {"camera_pose", to_json(v.camera_pose)},
          {"hand_pose", to_json(v.hand_pose)},
          {"q0", joints_deg(v.q0)},
          {"attempts", v.attempts}};
}

std::vector<TriggerEvent> read_events(std::istream& is) {
  std::vector<TriggerEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("events line " + std::to_string(line_no) + ": " + e.what());
    }
    check_keys(j, "event", {"t", "event"});
    if (!j.contains("t") || !j.contains("event"))
      throw FormatError("events line " + std::to_string(line_no) + ": needs 't' and 'event'");
    const auto kind = parse_event_kind(j.at("event").get<std::string>());
    if (!kind) throw FormatError("events line " + std::to_string(line_no) + ": unknown event");
    events.push_back({*kind, j.at("t").get<double>()});
  }
  return events;
}

json to_json(const SessionRecord& r) {
  json j = {{"tick", r.tick},
            {"t", r.t},
            {"phase", std::string(to_string(r.phase))},
            {"command", std::string(to_string(r.command.kind))},
            {"q", joints_deg(r.q)}};
  if (r.event) j["event"] = std::string(to_string(*r.event));
  if (r.command.kind == CommandKind::ServoVelocity || r.command.kind == CommandKind::RotationVelocity) {
    j["velocity"] = {{"wfe_deg_s", rad2deg(r.command.velocity.wfe)}, {"wps_deg_s", rad2deg(r.command.velocity.wps)}};
  }
  if (r.command.plan) {
    j["plan"] = {{"label", std::string(to_string(r.command.plan->selected_label))},
                 {"target", joints_deg(r.command.plan->target_joints)}};
  }
  if (r.notice != Notice::None) j["notice"] = std::string(to_string(r.notice));
  return j;
}

AnnotationInput annotation_input_from_json(const json& j) {
  check_keys(j, "annotation input", {"convention", "first_frame", "initial_pose", "displacements",
                                     "discarded", "gap_policy", "reinit"});
  if (!j.contains("convention"))
    throw FormatError("annotation input: missing 'convention' (T_prev_to_next or T_next_to_prev)");
  AnnotationInput in;
  const std::string conv = j.at("convention").get<std::string>();
  if (conv == "T_prev_to_next") in.convention = DisplacementConvention::PrevToNext;
  else if (conv == "T_next_to_prev") in.convention = DisplacementConvention::NextToPrev;
  else throw FormatError("annotation input: unknown convention '" + conv + "'");
  if (!j.contains("initial_pose")) throw FormatError("annotation input: missing 'initial_pose'");
  in.initial_pose = pose_from_json(j.at("initial_pose"));
  read_if(j, "first_frame", in.first_frame);
  auto frame_poses = [](const json& arr, const char* what) {
    std::vector<FramePose> out;
    for (const json& d : arr) {
      check_keys(d, what, {"frame", "pose"});
      out.push_back({d.at("frame").get<int>(), pose_from_json(d.at("pose"))});
    }
    return out;
  };
  if (j.contains("displacements")) in.displacements = frame_poses(j.at("displacements"), "displacement");
  if (j.contains("reinit")) in.reinit = frame_poses(j.at("reinit"), "reinit");
  read_if(j, "discarded", in.discarded);
  if (j.contains("gap_policy")) {
    const std::string g = j.at("gap_policy").get<std::string>();
    if (g == "compose_through") in.gap_policy = GapPolicy::ComposeThrough;
    else if (g == "break_chain") in.gap_policy = GapPolicy::BreakChain;
    else throw FormatError("annotation input: unknown gap_policy '" + g + "'");
  }
  in.validate();
  return in;
}

AnnotationInput load_annotation_input(const std::filesystem::path& path) {
  return annotation_input_from_json(read_json_file(path));
}

json to_json(const FrameAnnotation& f) {
  json masks = json::array();
  for (const PartMask& m : f.masks) masks.push_back(to_json(m));
  return {{"frame", f.frame_index}, {"pose", to_json(f.pose)}, {"masks", masks}};
}

void write_annotation(const std::filesystem::path& dir, const AnnotationInput& input,
                      const std::vector<FrameAnnotation>& frames) {
  std::filesystem::create_directories(dir);
  json listing = json::array();
  for (const FrameAnnotation& f : frames) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.json", f.frame_index);
    write_text_file(dir / name, to_json(f).dump(1) + "\n");
    listing.push_back({{"frame", f.frame_index}, {"file", name}, {"mask_count", f.masks.size()}});
  }
  const std::vector<int> gaps = sequence_gaps(input);
  const json manifest = {
      {"convention", input.convention == DisplacementConvention::PrevToNext ? "T_prev_to_next" : "T_next_to_prev"},
      {"gap_policy", input.gap_policy == GapPolicy::ComposeThrough ? "compose_through" : "break_chain"},
      {"has_gaps", !gaps.empty()},
      {"gaps", gaps},
      {"frames", listing}};
  write_text_file(dir / "manifest.json", manifest.dump(1) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os = open_out(path);
  os << text;
  if (!os) throw InvalidArgument("failed writing " + path.string());
}

}  // namespace wristservo::io
