#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sml/dataset.hpp"
#include "sml/scoring.hpp"
#include "sml/similarity.hpp"

namespace sml {

enum class Decoder { kSetSize, kThreshold };

Decoder parse_decoder(std::string_view name);
std::string_view to_string(Decoder decoder);

/// Label-set size predictor. Each training instance is relabelled with its
/// cardinality |Y_i| and the size class with the largest similarity sum wins.
class SizeModel {
 public:
  const TrainingSet& training() const noexcept { return *training_; }
  const SimilarityConfig& similarity() const noexcept { return similarity_; }
  /// Distinct observed cardinalities, ascending.
  std::span<const int> size_classes() const noexcept { return size_classes_; }
  /// Position of each training instance's cardinality in size_classes().
  std::span<const std::size_t> class_of() const noexcept { return class_of_; }

 private:
  friend SizeModel fit_size_model(std::shared_ptr<const TrainingSet>, const SimilarityConfig&);
  SizeModel() = default;

  std::shared_ptr<const TrainingSet> training_;
  SimilarityConfig similarity_;
  std::vector<int> size_classes_;
  std::vector<std::size_t> class_of_;
};

SizeModel fit_size_model(std::shared_ptr<const TrainingSet> training, const SimilarityConfig& similarity);
SizeModel fit_size_model(const TrainingSet& training, const SimilarityConfig& similarity);

/// Cardinality with the largest per-class similarity sum; ties go to the
/// smaller cardinality.
int predict_size(const SizeModel& model, const FeatureVector& x);

/// The `size` highest-scoring labels; equal scores prefer the smaller label id.
LabelSet decode_topk(const ScoreVector& scores, int size);

/// Threshold τ minimising |{k in Y : f_k <= τ}| + |{q not in Y : f_q >= τ}|.
///
/// Candidates are min - 1, max + 1 and the midpoints between consecutive
/// distinct scores. Among minimisers the midpoint of the widest gap is
/// returned (the two outer candidates count as unbounded gaps); remaining
/// ties go to the larger τ.
double compute_s_target(const ScoreVector& scores, const LabelSet& truth);

/// Misclassification count of threshold τ against `truth`.
int threshold_errors(const ScoreVector& scores, const LabelSet& truth, double tau);

/// Linear threshold t(x) = <w, f(x)> + b.
struct ThresholdModel {
  std::vector<double> weights;
  double bias = 0.0;

  double threshold(const ScoreVector& scores) const;
};

inline constexpr double kThresholdRidge = 1e-8;

/// Least-squares fit of <w, f_i> + b to targets_i via ridge-stabilised normal
/// equations on the augmented (K + 1)-dimensional system.
ThresholdModel fit_threshold(std::span<const ScoreVector> rows, std::span<const double> targets,
                             double ridge = kThresholdRidge);

/// { k : f_k > t(f) }
LabelSet decode_threshold(const ScoreVector& scores, const ThresholdModel& model);

}  // namespace sml
