#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wristservo/annotation.hpp"
#include "wristservo/bench.hpp"
#include "wristservo/errors.hpp"
#include "wristservo/io.hpp"
#include "wristservo/pipeline.hpp"
#include "wristservo/render.hpp"

namespace fs = std::filesystem;
using namespace wristservo;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string format = "csv";
  std::string object;
  int workers = -1;
};

BenchConfig load_config(const Globals& g) {
  BenchConfig c = g.config.empty() ? BenchConfig{} : io::load_bench_config(g.config);
  if (g.seed) c.sampler.seed = *g.seed;
  if (g.workers >= 0) c.workers = g.workers;
  return c;
}

SceneObject load_object(const Globals& g) {
  return g.object.empty() ? make_bottle() : io::load_scene(g.object);
}

fs::path out_dir(const Globals& g) {
  fs::create_directories(g.out);
  return g.out;
}

template <class F>
std::string render(F&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

void cmd_compare(const Globals& g, int n) {
  const BenchConfig cfg = load_config(g);
  const SceneObject scene = load_object(g);
  const auto t0 = std::chrono::steady_clock::now();
  const ComparisonReport report = run_comparison(n, scene, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = out_dir(g);
  const std::string summary = render([&](std::ostream& os) { io::write_comparison_summary(os, report); });
  if (g.format == "json") {
    io::write_text_file(dir / "comparison.json", io::to_json(report).dump(1) + "\n");
  } else {
    io::write_text_file(dir / "comparison.csv",
                        render([&](std::ostream& os) { io::write_comparison_csv(os, report); }));
    io::write_text_file(dir / "summary.txt", summary);
  }
  std::cout << summary;
  std::fprintf(stderr, "elapsed %.2f s\n", secs);
}

void cmd_fig3(const Globals& g, const Fig3Setup& setup) {
  const BenchConfig cfg = load_config(g);
  const SceneObject scene = load_object(g);
  const Fig3Report report = run_fig3_scenario(scene, cfg, setup);
  const fs::path dir = out_dir(g);
  const std::string summary = render([&](std::ostream& os) { io::write_fig3_summary(os, report); });
  if (g.format == "json") {
    io::write_text_file(dir / "fig3.json", io::to_json(report).dump(1) + "\n");
  } else {
    io::write_text_file(dir / "fig3_traces.csv",
                        render([&](std::ostream& os) { io::write_fig3_traces_csv(os, report); }));
    io::write_text_file(dir / "fig3_summary.txt", summary);
  }
  std::cout << summary;
}

Viewpoint pick_viewpoint(const BenchConfig& cfg, const SceneObject& scene, int index) {
  ViewpointGenerator gen(cfg.effective_sampler(scene), scene, cfg.params, cfg.intrinsics);
  const int bins = cfg.sampler.radius_bins;
  int found = -1;
  for (int drawn = 0; drawn < (index + 1) * cfg.sampler.max_attempts; ++drawn) {
    if (auto vp = gen.next(drawn % bins)) {
      if (++found == index) return *vp;
    }
  }
  throw SamplingExhausted("could not reach viewpoint " + std::to_string(index));
}

void cmd_episode(const Globals& g, const std::string& controller, int index, bool trace) {
  const BenchConfig cfg = load_config(g);
  const SceneObject scene = load_object(g);
  const Viewpoint vp = pick_viewpoint(cfg, scene, index);
  const EpisodeResult r = simulate_episode(parse_controller(controller), scene, vp.hand_pose, vp.q0,
                                           cfg.params, cfg.intrinsics, cfg.controller, cfg.episode);
  const fs::path dir = out_dir(g);
  io::json j = io::to_json(r, g.format == "json");
  j["viewpoint"] = io::to_json(vp);
  io::write_text_file(dir / "episode.json", j.dump(1) + "\n");
  if (trace && g.format == "csv") {
    io::write_text_file(dir / "trace.csv", render([&](std::ostream& os) { io::write_trace_csv(os, r); }));
  }
  std::printf("%s: converged %d after %d iterations, natural %d, final q (%.2f, %.2f) deg\n",
              std::string(to_string(r.controller)).c_str(), int(r.converged), r.iterations, int(r.natural),
              rad2deg(r.trajectory.back().q.wfe), rad2deg(r.trajectory.back().q.wps));
}

void cmd_session(const Globals& g, const std::string& events_path, int index, double duration,
                 const std::string& controller) {
  const BenchConfig cfg = load_config(g);
  const SceneObject scene = load_object(g);
  std::ifstream is(events_path);
  if (!is) throw InvalidArgument("cannot read " + events_path);
  const std::vector<TriggerEvent> events = io::read_events(is);
  const Viewpoint vp = pick_viewpoint(cfg, scene, index);

  PipelineEnvironment env;
  env.params = cfg.params;
  env.intrinsics = cfg.intrinsics;
  env.config.controller = parse_controller(controller);
  env.config.servo = cfg.controller;
  env.config.vision = cfg.episode;
  if (duration <= 0.0) duration = events.empty() ? 1.0 : events.back().t + 1.0;

  const auto records = run_session(events, scene, vp.hand_pose, vp.q0, env, duration);
  std::string lines;
  for (const SessionRecord& r : records) lines += io::to_json(r).dump() + "\n";
  io::write_text_file(out_dir(g) / "commands.jsonl", lines);
  std::printf("%zu ticks, final phase %s\n", records.size(),
              std::string(to_string(records.back().phase)).c_str());
}

// Camera orbiting the object; writes an annotation input file plus the true poses.
void cmd_sequence(const Globals& g, int frames, const std::string& convention) {
  const SceneObject scene = load_object(g);
  const Vec3 c = scene.centroid_world();
  std::vector<Pose> truth;
  for (int k = 0; k < frames; ++k) {
    const double a = deg2rad(1.5) * k;
    const Vec3 eye = c + Vec3(0.35 * std::cos(a), 0.35 * std::sin(a), 0.15 + 0.001 * k);
    truth.push_back(compose(inverse(look_at_camera(eye, c, deg2rad(0.5) * k)), scene.pose));
  }
  io::json disp = io::json::array();
  for (int k = 1; k < frames; ++k) {
    Pose d = compose(truth[k - 1], inverse(truth[k]));  // T_{c^{k-1},c^k}
    if (convention == "T_next_to_prev") d = inverse(d);
    disp.push_back({{"frame", k + 1}, {"pose", io::to_json(d)}});
  }
  io::json truth_json = io::json::array();
  for (int k = 0; k < frames; ++k) truth_json.push_back({{"frame", k + 1}, {"pose", io::to_json(truth[k])}});
  const io::json input = {{"convention", convention},
                          {"initial_pose", io::to_json(truth[0])},
                          {"displacements", disp},
                          {"discarded", io::json::array()}};
  const fs::path dir = out_dir(g);
  io::write_text_file(dir / "sequence.json", input.dump(1) + "\n");
  io::write_text_file(dir / "sequence_truth.json", truth_json.dump(1) + "\n");
  io::write_text_file(dir / "object.json", io::to_json(scene).dump() + "\n");
  std::printf("wrote %d frames\n", frames);
}

void cmd_annotate(const Globals& g, const std::string& input_path, const std::string& gap_policy) {
  const BenchConfig cfg = load_config(g);
  AnnotationInput input = io::load_annotation_input(input_path);
  if (gap_policy == "break_chain") input.gap_policy = GapPolicy::BreakChain;
  else if (gap_policy == "compose_through") input.gap_policy = GapPolicy::ComposeThrough;
  const SceneObject scene = load_object(g);
  const auto frames = annotate_sequence(input, cfg.intrinsics, scene, cfg.workers);
  io::write_annotation(out_dir(g), input, frames);
  const auto gaps = sequence_gaps(input);
  std::printf("annotated %zu frames%s\n", frames.size(),
              gaps.empty() ? "" : (", " + std::to_string(gaps.size()) + " discarded inside the chain").c_str());
}

void cmd_viewpoints(const Globals& g) {
  const BenchConfig cfg = load_config(g);
  const SceneObject scene = load_object(g);
  const auto vps = sample_hemisphere(cfg.effective_sampler(scene), scene, cfg.params, cfg.intrinsics);
  const fs::path dir = out_dir(g);
  if (g.format == "json") {
    io::json arr = io::json::array();
    for (const Viewpoint& v : vps) arr.push_back(io::to_json(v));
    io::write_text_file(dir / "viewpoints.json", arr.dump(1) + "\n");
  } else {
    std::string csv = "index,bin,radius,dir_x,dir_y,dir_z,roll_deg,q0_wfe,q0_wps,attempts\n";
    for (const Viewpoint& v : vps) {
      csv += std::to_string(v.index) + ',' + std::to_string(v.point.bin) + ',' + io::format_number(v.point.radius) +
             ',' + io::format_number(v.point.direction.x()) + ',' + io::format_number(v.point.direction.y()) + ',' +
             io::format_number(v.point.direction.z()) + ',' + io::format_number(rad2deg(v.point.roll)) + ',' +
             io::format_number(rad2deg(v.q0.wfe)) + ',' + io::format_number(rad2deg(v.q0.wps)) + ',' +
             std::to_string(v.attempts) + '\n';
    }
    io::write_text_file(dir / "viewpoints.csv", csv);
  }
  std::printf("%zu viewpoints\n", vps.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eye-in-hand visual servoing simulator for a 2-DoF prosthetic wrist"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Sampler seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--object", g.object, "Object mesh JSON (default: built-in bottle)")->check(CLI::ExistingFile);
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores)");

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  int n_points = 20;
  auto* compare = bench->add_subcommand("compare", "s-IBVS vs pp-IBVS over random viewpoints");
  compare->add_option("--n", n_points, "Number of viewpoints")->check(CLI::PositiveNumber);
  compare->callback([&] { cmd_compare(g, n_points); });

  Fig3Setup setup;
  double lateral = setup.lateral_offset, vertical = setup.vertical_offset;
  auto* fig3 = bench->add_subcommand("fig3", "Two initial flexions, both controllers");
  fig3->add_option("--lateral", lateral, "Sideways aim offset [m]");
  fig3->add_option("--vertical", vertical, "Vertical aim offset [m]");
  fig3->callback([&] {
    setup.lateral_offset = lateral;
    setup.vertical_offset = vertical;
    cmd_fig3(g, setup);
  });

  auto* sim = app.add_subcommand("sim", "Single runs");
  sim->require_subcommand(1);
  std::string controller = "pp";
  int index = 0;
  bool trace = true;
  auto* episode = sim->add_subcommand("episode", "One servoing episode from a sampled viewpoint");
  episode->add_option("--controller", controller, "s | pp");
  episode->add_option("--index", index, "Viewpoint index in the sampler sequence");
  episode->add_flag("!--no-trace", trace, "Skip trace.csv");
  episode->callback([&] { cmd_episode(g, controller, index, trace); });

  std::string events_path;
  double duration = 0.0;
  auto* session = sim->add_subcommand("session", "Replay an event log through the grasp pipeline");
  session->add_option("--events", events_path, "JSON-lines event log")->required()->check(CLI::ExistingFile);
  session->add_option("--controller", controller, "s | pp");
  session->add_option("--index", index, "Viewpoint index in the sampler sequence");
  session->add_option("--duration", duration, "Seconds to simulate (default: last event + 1 s)");
  session->callback([&] { cmd_session(g, events_path, index, duration, controller); });

  int frames = 50;
  std::string convention = "T_prev_to_next";
  auto* sequence = sim->add_subcommand("sequence", "Synthetic orbit for the annotation tool");
  sequence->add_option("--frames", frames)->check(CLI::PositiveNumber);
  sequence->add_option("--convention", convention)->check(CLI::IsMember({"T_prev_to_next", "T_next_to_prev"}));
  sequence->callback([&] { cmd_sequence(g, frames, convention); });

  std::string input_path, gap_policy;
  auto* annotate = app.add_subcommand("annotate", "Chain poses and render per-frame part masks");
  annotate->add_option("--input", input_path, "Annotation input JSON")->required()->check(CLI::ExistingFile);
  annotate->add_option("--gap-policy", gap_policy, "Override the file's gap policy")
      ->check(CLI::IsMember({"compose_through", "break_chain"}));
  annotate->callback([&] { cmd_annotate(g, input_path, gap_policy); });

  auto* viewpoints = app.add_subcommand("gen-viewpoints", "Sample hemisphere viewpoints");
  viewpoints->callback([&] { cmd_viewpoints(g); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
