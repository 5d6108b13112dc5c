#ifndef TNB_NOVELTY_AUTOENCODER_HPP_
#define TNB_NOVELTY_AUTOENCODER_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "tnb/nn/adam.hpp"
#include "tnb/nn/mlp.hpp"
#include "tnb/novelty/segments.hpp"
#include "tnb/random.hpp"

namespace tnb::novelty {

using nn::Matrix;

// Hidden widths of the deliberately over-parameterized ReLU stack.
inline const std::vector<std::size_t> kFullAutoencoderHidden{1024, 512, 256, 128, 64, 32,
                                                             64,   128, 256, 512, 1024};
// Scaled-down stack used for the low-dimensional environments.
inline const std::vector<std::size_t> kCompactAutoencoderHidden{256, 128, 64, 32, 64, 128, 256};

inline nn::MlpSpec autoencoder_spec(std::size_t segment_dim, std::vector<std::size_t> hidden) {
  nn::MlpSpec spec{segment_dim, std::move(hidden), segment_dim, nn::Activation::relu, nn::Activation::linear};
  spec.validate();
  return spec;
}

// Per-dimension whitening statistics of an autoencoder's training data.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t dim() const { return mean.size(); }

  static Normalization identity(std::size_t dim) {
    return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
  }

  // Standard deviations are floored at min_stddev so constant dimensions do
  // not blow up the whitened error.
  static Normalization fit(std::span<const StateSegment> segments, double min_stddev) {
    if (segments.empty()) throw ConfigError("normalization: no segments");
    const std::size_t d = segments.front().size();
    Normalization n{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (const auto& s : segments) {
      if (s.size() != d) throw DimensionError("normalization: ragged segments");
      for (std::size_t i = 0; i < d; ++i) n.mean[i] += s[i];
    }
    const double count = static_cast<double>(segments.size());
    for (auto& m : n.mean) m /= count;
    for (const auto& s : segments) {
      for (std::size_t i = 0; i < d; ++i) n.stddev[i] += (s[i] - n.mean[i]) * (s[i] - n.mean[i]);
    }
    for (auto& sd : n.stddev) sd = std::max(std::sqrt(sd / count), min_stddev);
    return n;
  }

  void whiten(Matrix& columns) const {
    const Eigen::Map<const nn::Vector> mu(mean.data(), static_cast<Eigen::Index>(mean.size()));
    const Eigen::Map<const nn::Vector> sd(stddev.data(), static_cast<Eigen::Index>(stddev.size()));
    columns.colwise() -= mu;
    columns.array().colwise() /= sd.array();
  }
};

struct Autoencoder {
  nn::MlpSpec spec;
  std::vector<double> params;
  Normalization normalization;

  std::size_t input_dim() const { return spec.input_dim; }

  // Squared Euclidean reconstruction error of each whitened column.
  nn::Vector reconstruction_errors(const Matrix& raw_segments) const {
    if (static_cast<std::size_t>(raw_segments.rows()) != input_dim()) {
      throw DimensionError("autoencoder: segment dimension " + std::to_string(raw_segments.rows()) +
                           " != input dimension " + std::to_string(input_dim()));
    }
    Matrix z = raw_segments;
    normalization.whiten(z);
    const Matrix y = nn::forward_batch(spec, params, z);
    return (y - z).colwise().squaredNorm().transpose();
  }

  double reconstruction_error(std::span<const double> segment) const {
    Matrix x = Eigen::Map<const nn::Vector>(segment.data(), static_cast<Eigen::Index>(segment.size()));
    return reconstruction_errors(x)(0);
  }
};

struct AutoencoderTraining {
  std::size_t epochs = 200;
  std::size_t batch_size = 1024;
  double learning_rate = 1e-3;
  double min_stddev = 0.1;
  std::uint64_t seed = 0;
};

inline std::vector<double> initial_autoencoder_params(const nn::MlpSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed, "autoencoder-init");
  return nn::init_params(spec, rng);
}

// Minimizes the mean squared reconstruction error of the whitened segments
// with Adam. `loss_history`, when given, receives the mean per-epoch loss.
inline Autoencoder train_autoencoder(std::span<const StateSegment> segments, const nn::MlpSpec& spec,
                                     const AutoencoderTraining& training,
                                     std::vector<double>* loss_history = nullptr) {
  if (segments.empty()) throw TrainingError("autoencoder: empty segment set");
  spec.validate();
  if (spec.input_dim != spec.output_dim) throw ConfigError("autoencoder: input and output dims differ");
  if (segments.front().size() != spec.input_dim) {
    throw DimensionError("autoencoder: segment dimension " + std::to_string(segments.front().size()) +
                         " != spec input dimension " + std::to_string(spec.input_dim));
  }
  if (training.batch_size == 0) throw ConfigError("autoencoder: batch_size must be positive");

  Autoencoder ae{spec, initial_autoencoder_params(spec, training.seed),
                 Normalization::fit(segments, training.min_stddev)};
  Matrix data = nn::columns(segments, spec.input_dim);
  ae.normalization.whiten(data);

  const std::size_t n = segments.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(training.seed, "autoencoder-shuffle");
  nn::AdamState adam(ae.params.size(), training.learning_rate);
  std::vector<double> grad(ae.params.size());
  nn::ForwardCache cache;
  Matrix batch;

  for (std::size_t epoch = 0; epoch < training.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += training.batch_size) {
      const std::size_t end = std::min(n, begin + training.batch_size);
      const auto b = static_cast<Eigen::Index>(end - begin);
      batch.resize(data.rows(), b);
      for (Eigen::Index i = 0; i < b; ++i) batch.col(i) = data.col(static_cast<Eigen::Index>(order[begin + i]));
      nn::forward_batch(spec, ae.params, batch, cache);
      const Matrix residual = cache.output() - batch;
      epoch_loss += residual.squaredNorm();
      std::fill(grad.begin(), grad.end(), 0.0);
      nn::backward_batch(spec, ae.params, cache, (2.0 / static_cast<double>(b)) * residual, grad);
      nn::adam_step(adam, ae.params, grad, /*maximize=*/false);
    }
    if (loss_history != nullptr) loss_history->push_back(epoch_loss / static_cast<double>(n));
  }
  if (!nn::all_finite(ae.params)) throw TrainingError("autoencoder: parameters diverged");
  return ae;
}

// Ordered autoencoders, one per finished policy. All share one input dimension.
class AutoencoderSet {
 public:
  bool empty() const { return autoencoders_.empty(); }
  std::size_t size() const { return autoencoders_.size(); }
  std::size_t segment_dim() const { return empty() ? 0 : autoencoders_.front().input_dim(); }
  const Autoencoder& operator[](std::size_t i) const { return autoencoders_.at(i); }
  const std::vector<Autoencoder>& autoencoders() const { return autoencoders_; }

  void add(Autoencoder ae) {
    if (!empty() && ae.input_dim() != segment_dim()) {
      throw DimensionError("autoencoder set: new autoencoder takes " + std::to_string(ae.input_dim()) +
                           "-dim segments, set uses " + std::to_string(segment_dim()));
    }
    if (ae.normalization.dim() != ae.input_dim()) throw DimensionError("autoencoder: normalization size mismatch");
    autoencoders_.push_back(std::move(ae));
  }

  // First `count` autoencoders (e.g. those of policies preceding a given one).
  AutoencoderSet prefix(std::size_t count) const {
    AutoencoderSet out;
    for (std::size_t i = 0; i < std::min(count, size()); ++i) out.add(autoencoders_[i]);
    return out;
  }

  // Minimum reconstruction error over the set for each column; +inf when empty.
  nn::Vector min_errors(const Matrix& raw_segments) const {
    nn::Vector best = nn::Vector::Constant(raw_segments.cols(), std::numeric_limits<double>::infinity());
    for (const auto& ae : autoencoders_) best = best.cwiseMin(ae.reconstruction_errors(raw_segments));
    return best;
  }

  double min_error(std::span<const double> segment) const {
    Matrix x = Eigen::Map<const nn::Vector>(segment.data(), static_cast<Eigen::Index>(segment.size()));
    return min_errors(x)(0);
  }

 private:
  std::vector<Autoencoder> autoencoders_;
};

}  // namespace tnb::novelty

#endif  // TNB_NOVELTY_AUTOENCODER_HPP_
