#include "wristservo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "wristservo/errors.hpp"

namespace wristservo {

HemisphereSampler BenchConfig::comparison_sampler() {
  HemisphereSampler s;
  s.radius_min = 0.33;
  s.radius_max = 0.37;
  s.radius_bins = 1;
  s.points_per_bin = 20;
  s.seed = 7;
  return s;
}

HemisphereSampler BenchConfig::effective_sampler(const SceneObject& scene) const {
  HemisphereSampler s = sampler;
  if (center_on_object) s.center = scene.centroid_world();
  return s;
}

int sign_of(double v, double zero_tol) { return v > zero_tol ? 1 : (v < -zero_tol ? -1 : 0); }

ControllerStats summarize(ControllerKind controller, const std::vector<EpisodeRow>& rows) {
  ControllerStats s;
  s.controller = controller;
  double sum = 0.0;
  for (const EpisodeRow& r : rows) {
    if (r.controller != controller) continue;
    ++s.total;
    sum += r.iterations;
    s.natural += r.natural;
    s.converged += r.converged;
    s.flipped += r.flipped;
  }
  if (s.total == 0) return s;
  s.mean_iterations = sum / s.total;
  if (s.total > 1) {
    double ss = 0.0;
    for (const EpisodeRow& r : rows) {
      if (r.controller == controller) ss += (r.iterations - s.mean_iterations) * (r.iterations - s.mean_iterations);
    }
    s.std_iterations = std::sqrt(ss / (s.total - 1));
  }
  return s;
}

namespace {

constexpr ControllerKind kControllers[2] = {ControllerKind::StandardIbvs,
                                            ControllerKind::PartitionedIbvs};

struct Slot {
  Viewpoint viewpoint;
  std::array<std::optional<EpisodeResult>, 2> results;
  bool rejected = false;
};

template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
  std::size_t n_workers = workers > 0 ? static_cast<std::size_t>(workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, std::max<std::size_t>(n, 1));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

EpisodeRow make_row(int episode, const Viewpoint& vp, const EpisodeResult& r) {
  EpisodeRow row;
  row.episode = episode;
  row.controller = r.controller;
  row.iterations = r.iterations;
  row.converged = r.converged;
  row.natural = r.natural;
  row.final_error = r.final_error_norm;
  row.q0 = vp.q0;
  row.q_final = r.trajectory.back().q;
  const double wps = JointLimits{-kPi, kPi}.wrap(row.q_final.wps);
  row.flipped = std::abs(wps) > kPi / 2;
  return row;
}

}  // namespace

ComparisonReport run_comparison(int n_points, const SceneObject& scene, const BenchConfig& config) {
  if (n_points < 1) throw InvalidArgument("n_points must be at least 1");
  config.params.validate();
  config.intrinsics.validate();
  config.controller.validate();
  config.sampler.validate();

  ComparisonReport report;
  report.seed = config.sampler.seed;
  report.n_points = n_points;

  ViewpointGenerator gen(config.effective_sampler(scene), scene, config.params, config.intrinsics);
  int drawn = 0;
  const int max_draws = n_points * std::max(1, config.sampler.max_attempts);
  auto draw = [&]() -> Viewpoint {
    while (drawn < max_draws) {
      const int bin = drawn++ % config.sampler.radius_bins;
      if (auto vp = gen.next(bin)) return *vp;
      ++report.rejected;
    }
    throw SamplingExhausted("could not find enough in-view viewpoints");
  };

  std::vector<Slot> slots(static_cast<std::size_t>(n_points));
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < slots.size(); ++i) pending.push_back(i);

  // Viewpoints are drawn sequentially so that the sequence is a function of the
  // seed only; rejected slots are refilled in index order.
  while (!pending.empty()) {
    for (std::size_t i : pending) {
      slots[i] = Slot{};
      slots[i].viewpoint = draw();
    }
    const std::size_t n_jobs = pending.size() * 2;
    parallel_for(n_jobs, config.workers, [&](std::size_t j) {
      Slot& slot = slots[pending[j / 2]];
      const ControllerKind c = kControllers[j % 2];
      try {
        slot.results[j % 2] =
            simulate_episode(c, scene, slot.viewpoint.hand_pose, slot.viewpoint.q0, config.params,
                             config.intrinsics, config.controller, config.episode);
      } catch (const NothingVisible&) {
        slot.results[j % 2].reset();
      }
    });
    std::vector<std::size_t> retry;
    for (std::size_t i : pending) {
      if (!slots[i].results[0] || !slots[i].results[1]) {
        ++report.rejected;
        retry.push_back(i);
      }
    }
    pending = std::move(retry);
  }

  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (const auto& r : slots[i].results) {
      report.rows.push_back(make_row(static_cast<int>(i), slots[i].viewpoint, *r));
    }
  }
  for (int c = 0; c < 2; ++c) report.stats[c] = summarize(kControllers[c], report.rows);
  return report;
}

Pose fig3_hand_pose(const SceneObject& scene, const WristParams& params, const Fig3Setup& setup) {
  const Vec3 centroid = scene.centroid_world();
  const Vec3 view_dir(std::cos(setup.elevation), 0.0, std::sin(setup.elevation));
  const Vec3 eye = centroid + setup.distance * view_dir;
  const Vec3 side = Vec3::UnitZ().cross(view_dir).normalized();
  const Pose camera = look_at_camera(eye, centroid + setup.lateral_offset * side + setup.vertical_offset * Vec3::UnitZ(), 0.0);
  return compose(camera, inverse(forward_kinematics(params, JointState{})));
}

Fig3Report run_fig3_scenario(const SceneObject& scene, const BenchConfig& config,
                             const Fig3Setup& setup) {
  Fig3Report report;
  report.hand_pose = fig3_hand_pose(scene, config.params, setup);
  std::size_t k = 0;
  for (ControllerKind c : kControllers) {
    for (const JointState& q0 : setup.initial) {
      Fig3Trace& t = report.traces[k++];
      t.controller = c;
      t.q0 = q0;
      t.result = simulate_episode(c, scene, report.hand_pose, q0, config.params, config.intrinsics,
                                  config.controller, config.episode);
      t.first_wps_sign = sign_of(t.result.first_command.wps);
    }
  }
  return report;
}

}  // namespace wristservo
