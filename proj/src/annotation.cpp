#include "wristservo/annotation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <thread>

#include "wristservo/errors.hpp"
#include "wristservo/render.hpp"

namespace wristservo {

namespace {

template <class T, class Key>
bool strictly_increasing(const std::vector<T>& v, Key key) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (key(v[i]) <= key(v[i - 1])) return false;
  }
  return true;
}

int last_frame(const AnnotationInput& in) {
  int last = in.first_frame;
  if (!in.displacements.empty()) last = std::max(last, in.displacements.back().frame);
  if (!in.reinit.empty()) last = std::max(last, in.reinit.back().frame);
  return last;
}

}  // namespace

void AnnotationInput::validate() const {
  auto frame_of = [](const FramePose& f) { return f.frame; };
  if (!strictly_increasing(displacements, frame_of))
    throw InvalidArgument("displacement frame indices must be strictly increasing");
  if (!strictly_increasing(reinit, frame_of))
    throw InvalidArgument("reinit frame indices must be strictly increasing");
  if (!strictly_increasing(discarded, [](int k) { return k; }))
    throw InvalidArgument("discarded frame indices must be strictly increasing");
  if (!displacements.empty() && displacements.front().frame <= first_frame)
    throw InvalidArgument("displacements must lead into frames after the first frame");
  if (std::binary_search(discarded.begin(), discarded.end(), first_frame))
    throw InvalidArgument("the initial frame cannot be discarded");
}

std::vector<int> sequence_gaps(const AnnotationInput& input) {
  const int last = last_frame(input);
  std::vector<int> gaps;
  for (int k : input.discarded) {
    if (k > input.first_frame && k <= last) gaps.push_back(k);
  }
  return gaps;
}

std::vector<FramePose> chain_sequence(const AnnotationInput& input) {
  input.validate();
  std::map<int, Pose> disp;
  for (const FramePose& d : input.displacements) {
    disp.emplace(d.frame, input.convention == DisplacementConvention::PrevToNext
                              ? d.pose
                              : inverse(d.pose));
  }
  std::map<int, Pose> reinit;
  for (const FramePose& r : input.reinit) reinit.emplace(r.frame, r.pose);
  const std::set<int> discarded(input.discarded.begin(), input.discarded.end());

  std::vector<FramePose> out{{input.first_frame, input.initial_pose}};
  Pose current = input.initial_pose;
  bool broken = false;
  const int last = last_frame(input);

  for (int k = input.first_frame + 1; k <= last; ++k) {
    const bool drop = discarded.count(k) > 0;
    if (input.gap_policy == GapPolicy::BreakChain) {
      if (drop) {
        broken = true;
        continue;
      }
      if (broken) {
        auto r = reinit.find(k);
        if (r == reinit.end())
          throw ChainGap("frame " + std::to_string(k) + " follows a discarded frame and has no re-init pose");
        current = r->second;
        broken = false;
        out.push_back({k, current});
        continue;
      }
    }
    auto d = disp.find(k);
    if (d == disp.end()) {
      throw ChainGap("no displacement leading into frame " + std::to_string(k));
    }
    current = chain_step(current, d->second);
    if (!drop) out.push_back({k, current});
  }
  return out;
}

std::vector<FrameAnnotation> annotate_sequence(const AnnotationInput& input,
                                               const CameraIntrinsics& intrinsics,
                                               const SceneObject& object, int workers) {
  intrinsics.validate();
  if (object.parts.empty()) throw MeshMissing("object has no parts");
  for (const ObjectPart& p : object.parts) {
    if (p.mesh.vertices.empty() || p.mesh.triangles.empty())
      throw MeshMissing("object part '" + std::string(to_string(p.label)) + "' has an empty mesh");
  }

  const std::vector<FramePose> poses = chain_sequence(input);
  std::vector<FrameAnnotation> frames(poses.size());

  auto render_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      frames[i].frame_index = poses[i].frame;
      frames[i].pose = poses[i].pose;
      try {
        frames[i].masks = render_part_masks_from(intrinsics, poses[i].pose, object);
      } catch (const NothingVisible&) {
        frames[i].masks.clear();
      }
    }
  };

  std::size_t n_workers =
      workers > 0 ? static_cast<std::size_t>(workers)
                  : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, std::max<std::size_t>(1, frames.size()));
  if (n_workers <= 1) {
    render_range(0, frames.size());
    return frames;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (frames.size() + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(frames.size(), b + chunk);
    if (b < e) pool.emplace_back(render_range, b, e);
  }
  for (std::thread& t : pool) t.join();
  return frames;
}

}  // namespace wristservo
