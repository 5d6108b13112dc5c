#ifndef TNB_NOVELTY_SEGMENTS_HPP_
#define TNB_NOVELTY_SEGMENTS_HPP_

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "tnb/error.hpp"
#include "tnb/rollout.hpp"

namespace tnb::novelty {

struct SegmentConfig {
  std::size_t length = 45;  // L, window length in steps
  std::size_t stride = 3;   // G, subsampling stride inside the window
  double w_novel = 2.0;     // sensitivity of the novelty reward

  // States per segment: s_t, s_{t+G}, ..., s_{t+G*floor(L/G)}.
  std::size_t states_per_segment() const { return length / stride + 1; }
  std::size_t segment_dim(std::size_t state_dim) const { return state_dim * states_per_segment(); }

  void validate() const {
    if (length == 0) throw ConfigError("segment: length must be positive");
    if (stride == 0) throw ConfigError("segment: stride must be positive");
    if (stride > length) throw ConfigError("segment: stride must not exceed length");
    if (!(w_novel > 0)) throw ConfigError("segment: w_novel must be positive");
  }
};

using StateSegment = std::vector<double>;

// Concatenates states[start + j*G] for j = 0..floor(L/G). Requires
// start + L < states.size().
inline StateSegment make_segment(const std::vector<envs::Observation>& states, std::size_t start,
                                 const SegmentConfig& config) {
  if (start + config.length >= states.size()) throw ConfigError("segment: window exceeds rollout");
  StateSegment segment;
  segment.reserve(config.segment_dim(states[start].size()));
  for (std::size_t j = 0; j < config.states_per_segment(); ++j) {
    const auto& s = states[start + j * config.stride];
    segment.insert(segment.end(), s.begin(), s.end());
  }
  return segment;
}

// Windows start at t = 0, w, 2w, ... (w = window_stride) for every t with
// t + L < rollout length. window_stride 1 gives the sliding windows used for
// reward annotation, window_stride L the disjoint chunks used for training.
// Rollouts shorter than L + 1 states contribute nothing.
inline std::vector<StateSegment> extract_segments(std::span<const Rollout> rollouts, const SegmentConfig& config,
                                                  std::size_t window_stride = 1) {
  config.validate();
  if (window_stride == 0) throw ConfigError("segment: window stride must be positive");
  std::vector<StateSegment> segments;
  for (const auto& rollout : rollouts) {
    for (std::size_t t = 0; t + config.length < rollout.length(); t += window_stride) {
      segments.push_back(make_segment(rollout.states, t, config));
    }
  }
  return segments;
}

// Sorted, duplicate-free copy of the segment pool.
inline std::vector<StateSegment> unique_segments(std::vector<StateSegment> segments) {
  std::sort(segments.begin(), segments.end());
  segments.erase(std::unique(segments.begin(), segments.end()), segments.end());
  return segments;
}

}  // namespace tnb::novelty

#endif  // TNB_NOVELTY_SEGMENTS_HPP_
