#ifndef TNB_PG_POLICY_HPP_
#define TNB_PG_POLICY_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "tnb/nn/mlp.hpp"
#include "tnb/nn/persistence.hpp"
#include "tnb/random.hpp"

namespace tnb::pg {

using nn::Matrix;
using nn::Vector;

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

// Diagonal Gaussian log-density.
inline double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                                std::span<const double> action) {
  double lp = 0.0;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    const double z = (action[j] - mean[j]) * std::exp(-log_std[j]);
    lp += -0.5 * z * z - log_std[j] - kHalfLog2Pi;
  }
  return lp;
}

// MLP mean with a learned, state-independent log standard deviation. The flat
// parameter vector holds the mean-network parameters followed by one log-std
// per action dimension.
struct GaussianPolicy {
  static constexpr double kMinLogStd = -5.0;
  static constexpr double kMaxLogStd = 2.0;

  nn::MlpSpec mean_spec;
  std::vector<double> params;

  static GaussianPolicy create(std::size_t observation_dim, std::size_t action_dim,
                               std::vector<std::size_t> hidden, double init_log_std, std::uint64_t seed) {
    GaussianPolicy p;
    p.mean_spec = {observation_dim, std::move(hidden), action_dim, nn::Activation::tanh, nn::Activation::linear};
    Rng rng = make_rng(seed, "policy-init");
    p.params = nn::init_params(p.mean_spec, rng);
    p.params.insert(p.params.end(), action_dim, std::clamp(init_log_std, kMinLogStd, kMaxLogStd));
    return p;
  }

  std::size_t observation_dim() const { return mean_spec.input_dim; }
  std::size_t action_dim() const { return mean_spec.output_dim; }
  std::size_t mean_param_count() const { return mean_spec.param_count(); }
  std::size_t param_count() const { return params.size(); }

  std::span<const double> mean_params() const { return {params.data(), mean_param_count()}; }
  std::span<const double> log_std() const { return {params.data() + mean_param_count(), action_dim()}; }

  std::vector<double> mean(std::span<const double> observation) const {
    return nn::mlp_forward(mean_spec, mean_params(), observation);
  }

  Matrix mean_batch(const Matrix& observations) const {
    return nn::forward_batch(mean_spec, mean_params(), observations);
  }

  double log_prob(std::span<const double> observation, std::span<const double> action) const {
    return gaussian_log_prob(mean(observation), log_std(), action);
  }

  struct Sample {
    std::vector<double> action;
    double log_prob = 0.0;
  };

  Sample sample(std::span<const double> observation, Rng& rng) const {
    const std::vector<double> mu = mean(observation);
    Sample s{mu, 0.0};
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto ls = log_std();
    for (std::size_t j = 0; j < s.action.size(); ++j) s.action[j] += std::exp(ls[j]) * normal(rng);
    s.log_prob = gaussian_log_prob(mu, ls, s.action);
    return s;
  }

  Sample deterministic(std::span<const double> observation) const {
    Sample s{mean(observation), 0.0};
    s.log_prob = gaussian_log_prob(s.action, log_std(), s.action);
    return s;
  }

  void clamp_log_std() {
    for (std::size_t j = 0; j < action_dim(); ++j) {
      double& v = params[mean_param_count() + j];
      v = std::clamp(v, kMinLogStd, kMaxLogStd);
    }
  }

  void validate() const {
    mean_spec.validate();
    if (params.size() != mean_param_count() + action_dim()) {
      throw DimensionError("policy: parameter count does not match mean network + log-std");
    }
  }
};

inline constexpr int kPolicyFormatVersion = 1;

inline Json policy_to_json(const GaussianPolicy& policy) {
  return {{"format", "tnb-policy"},
          {"version", kPolicyFormatVersion},
          {"mean_spec", nn::spec_to_json(policy.mean_spec)},
          {"params", policy.params}};
}

inline GaussianPolicy policy_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "tnb-policy") throw FormatError("not a tnb-policy document");
  if (j.value("version", -1) != kPolicyFormatVersion) throw FormatError("unsupported tnb-policy version");
  GaussianPolicy p;
  p.mean_spec = nn::spec_from_json(j.at("mean_spec"));
  try {
    p.params = j.at("params").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed policy params: ") + e.what());
  }
  p.validate();
  return p;
}

inline void save_policy(const std::filesystem::path& path, const GaussianPolicy& policy) {
  write_json_file(path, policy_to_json(policy), -1);
}

inline GaussianPolicy load_policy(const std::filesystem::path& path) { return policy_from_json(read_json_file(path)); }

}  // namespace tnb::pg

#endif  // TNB_PG_POLICY_HPP_
