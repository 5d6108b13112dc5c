#ifndef TNB_TRIAL_HARVEST_HPP_
#define TNB_TRIAL_HARVEST_HPP_

#include <span>
#include <string>
#include <vector>

#include "tnb/pg/collect.hpp"
#include "tnb/trial/config.hpp"

namespace tnb::trial {

struct HarvestResult {
  std::vector<novelty::StateSegment> segments;
  std::size_t rollouts = 0;
  std::size_t steps = 0;
  std::vector<std::string> warnings;
};

// Rolls out every snapshot and pools its segments. Chunks are disjoint unless
// config.window_stride says otherwise. An empty pool is reported as a warning;
// the caller decides what to do about it.
inline HarvestResult harvest_ae_data(std::span<const pg::GaussianPolicy> snapshots, const envs::Environment& env,
                                     const AeDataConfig& config, const novelty::SegmentConfig& segment,
                                     std::uint64_t seed) {
  if (snapshots.empty()) throw ConfigError("harvest: no policy snapshots");
  config.validate();
  const std::size_t stride = config.window_stride == 0 ? segment.length : config.window_stride;
  const auto mode = config.stochastic ? pg::ActionMode::stochastic : pg::ActionMode::mean;
  auto instance = env.clone();
  Rng rng = make_rng(seed, "harvest-rollouts");
  HarvestResult out;
  for (const auto& policy : snapshots) {
    std::vector<Rollout> rollouts;
    for (std::size_t r = 0; r < config.rollouts_per_snapshot; ++r) {
      rollouts.push_back(pg::run_episode(policy, *instance, rng, mode));
      out.steps += rollouts.back().length();
    }
    out.rollouts += rollouts.size();
    auto segs = novelty::extract_segments(rollouts, segment, stride);
    out.segments.insert(out.segments.end(), std::make_move_iterator(segs.begin()), std::make_move_iterator(segs.end()));
  }
  if (out.segments.empty()) {
    out.warnings.push_back("harvest: no rollout was longer than the segment length " +
                           std::to_string(segment.length) + "; segment pool is empty");
  }
  return out;
}

}  // namespace tnb::trial

#endif  // TNB_TRIAL_HARVEST_HPP_
