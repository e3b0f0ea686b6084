#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sml/dataset.hpp"
#include "sml/similarity.hpp"

namespace sml {

/// f(x): one confidence per label. Index 0 holds label 1.
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::size_t label_count) : values_(label_count, 0.0) {}
  explicit ScoreVector(std::vector<double> values) : values_(std::move(values)) {}
  ScoreVector(std::initializer_list<double> values) : values_(values) {}

  int label_count() const noexcept { return static_cast<int>(values_.size()); }
  double label(LabelId k) const { return values_.at(static_cast<std::size_t>(k - 1)); }
  double& label(LabelId k) { return values_.at(static_cast<std::size_t>(k - 1)); }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

 private:
  std::vector<double> values_;
};

/// Uniform sampling without replacement of the training instances.
struct Sampling {
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

/// Instance-based SML classifier: the (possibly sampled) training set plus Φ.
/// Immutable and safe to share across threads.
class SmlModel {
 public:
  const TrainingSet& training() const noexcept { return *training_; }
  std::shared_ptr<const TrainingSet> training_ptr() const noexcept { return training_; }
  const SimilarityConfig& similarity() const noexcept { return similarity_; }
  const std::optional<Sampling>& sampling() const noexcept { return sampling_; }
  int label_count() const noexcept { return training_->label_count(); }
  std::size_t feature_count() const noexcept { return training_->feature_count(); }

 private:
  friend SmlModel fit(std::shared_ptr<const TrainingSet>, const SimilarityConfig&,
                      const std::optional<Sampling>&);
  SmlModel(std::shared_ptr<const TrainingSet> training, SimilarityConfig similarity,
           std::optional<Sampling> sampling)
      : training_(std::move(training)), similarity_(similarity), sampling_(sampling) {}

  std::shared_ptr<const TrainingSet> training_;
  SimilarityConfig similarity_;
  std::optional<Sampling> sampling_;
};

/// Validates inputs and stores the training data; with sampling, the model
/// keeps a sampled copy. Throws std::invalid_argument on an empty training
/// set, an invalid similarity config, or a fraction outside (0, 1].
SmlModel fit(std::shared_ptr<const TrainingSet> training, const SimilarityConfig& similarity,
             const std::optional<Sampling>& sampling = std::nullopt);
SmlModel fit(const TrainingSet& training, const SimilarityConfig& similarity,
             const std::optional<Sampling>& sampling = std::nullopt);

/// Sum of Φ(x, x_j) over D_k, in ascending training id order.
double score_label(const SmlModel& model, const FeatureVector& x, LabelId k);

/// All K label scores from a single pass over the training set.
ScoreVector score_all(const SmlModel& model, const FeatureVector& x);

/// score_all for every query. Output is identical for any worker count;
/// 0 workers means one per hardware thread.
std::vector<ScoreVector> score_batch(const SmlModel& model, std::span<const FeatureVector> queries,
                                     unsigned workers = 1);

/// ceil(fraction * n) ids drawn uniformly without replacement, ascending.
std::vector<std::size_t> sample_ids(std::size_t count, double fraction, std::uint64_t seed);

/// Training set restricted to `sample_ids`, original order preserved.
TrainingSet sample_training(const TrainingSet& training, double fraction, std::uint64_t seed);

}  // namespace sml
