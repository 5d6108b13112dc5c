#ifndef TNB_NOVELTY_REWARD_HPP_
#define TNB_NOVELTY_REWARD_HPP_

#include <cmath>
#include <span>

#include "tnb/novelty/autoencoder.hpp"
#include "tnb/novelty/segments.hpp"
#include "tnb/rollout.hpp"

namespace tnb::novelty {

// -exp(-w * e): -1 for a perfectly reconstructed segment, approaching 0 as the
// minimum reconstruction error e grows.
inline double novelty_from_error(double min_error, double w_novel) { return -std::exp(-w_novel * min_error); }

// Zero when the set is empty (nothing to be novel against).
inline double novelty_reward(std::span<const double> segment, const AutoencoderSet& set,
                             const SegmentConfig& config) {
  if (set.empty()) return 0.0;
  if (segment.size() != set.segment_dim()) {
    throw DimensionError("novelty: segment dimension " + std::to_string(segment.size()) +
                         " != autoencoder input dimension " + std::to_string(set.segment_dim()));
  }
  return novelty_from_error(set.min_error(segment), config.w_novel);
}

// Step t >= L gets the reward of the window starting at t - L; earlier steps
// get 0. Task rewards are untouched.
inline void annotate_novelty(Rollout& rollout, const AutoencoderSet& set, const SegmentConfig& config) {
  const std::size_t n = rollout.length();
  rollout.novelty_rewards.assign(n, 0.0);
  if (set.empty() || n <= config.length) return;
  const std::size_t state_dim = rollout.states.front().size();
  const std::size_t dim = config.segment_dim(state_dim);
  if (dim != set.segment_dim()) {
    throw DimensionError("novelty: rollout segments have dimension " + std::to_string(dim) +
                         ", autoencoders expect " + std::to_string(set.segment_dim()));
  }
  const std::size_t count = n - config.length;
  Matrix segments(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t j = 0; j < config.states_per_segment(); ++j) {
      const auto& s = rollout.states[c + j * config.stride];
      for (std::size_t k = 0; k < state_dim; ++k) {
        segments(static_cast<Eigen::Index>(j * state_dim + k), static_cast<Eigen::Index>(c)) = s[k];
      }
    }
  }
  const nn::Vector errors = set.min_errors(segments);
  for (std::size_t c = 0; c < count; ++c) {
    rollout.novelty_rewards[config.length + c] = novelty_from_error(errors(static_cast<Eigen::Index>(c)), config.w_novel);
  }
}

}  // namespace tnb::novelty

#endif  // TNB_NOVELTY_REWARD_HPP_
