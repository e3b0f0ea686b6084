#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sml/dataset.hpp"
#include "sml/decoding.hpp"
#include "sml/metrics.hpp"
#include "sml/scoring.hpp"
#include "sml/similarity.hpp"

namespace sml {

/// Where the inner cross-validation models get their training data.
enum class TuningScope {
  /// Each inner validation fold of the tuning subset is scored against the
  /// whole outer training portion minus that fold.
  kTrainingPool,
  /// Inner models are fit on the remaining inner folds of the tuning subset only.
  kSubsetOnly,
};

TuningScope parse_tuning_scope(std::string_view name);
std::string_view to_string(TuningScope scope);

/// Grid search for the RBF gamma by k-fold cross-validation on a sampled
/// fraction of the training data.
struct TuningPlan {
  std::vector<double> gamma_grid = {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  int inner_folds = 5;
  double tuning_fraction = 0.10;
  Metric criterion = Metric::kAveragePrecision;
  TuningScope scope = TuningScope::kTrainingPool;

  void validate() const;
};

struct TuningResult {
  double gamma = 0.0;
  /// Mean inner-CV criterion per grid entry, in grid order.
  std::vector<double> criterion_values;
};

/// Best gamma on the grid (ties go to the smaller gamma). Throws
/// std::invalid_argument when the tuning subset has fewer instances than
/// inner folds.
TuningResult tune_gamma_detailed(const TrainingSet& data, const TuningPlan& plan, std::uint64_t seed,
                                 unsigned workers = 1);
double tune_gamma(const TrainingSet& data, const TuningPlan& plan, std::uint64_t seed, unsigned workers = 1);

/// Everything needed to train a predictor from a training set.
struct ModelConfig {
  SimilarityConfig similarity;  // gamma ignored when auto_gamma is set
  bool auto_gamma = true;
  Decoder decoder = Decoder::kSetSize;
  double sample_fraction = 1.0;
  TuningPlan tuning;

  void validate() const;
};

struct Prediction {
  LabelSet labels;
  ScoreVector scores;
};

/// Scorer plus the selected label-set decoder.
class Predictor {
 public:
  /// Tunes gamma when requested, fits the scoring model and the decoder.
  /// Sub-seeds for tuning and sampling are derived from `seed`.
  static Predictor train(std::shared_ptr<const TrainingSet> training, const ModelConfig& config,
                         std::uint64_t seed, unsigned workers = 1);

  std::vector<Prediction> predict(std::span<const FeatureVector> queries, unsigned workers = 1) const;

  const SmlModel& model() const noexcept { return model_; }
  Decoder decoder() const noexcept { return decoder_; }
  const std::optional<SizeModel>& size_model() const noexcept { return size_model_; }
  const std::optional<ThresholdModel>& threshold_model() const noexcept { return threshold_model_; }

 private:
  Predictor(SmlModel model, Decoder decoder) : model_(std::move(model)), decoder_(decoder) {}

  SmlModel model_;
  Decoder decoder_;
  std::optional<SizeModel> size_model_;
  std::optional<ThresholdModel> threshold_model_;
};

struct ExperimentConfig {
  std::filesystem::path data_path;
  DataFormat format = DataFormat::kMultilabelSvm;
  int fold_count = 10;
  std::uint64_t seed = 42;
  ModelConfig model;
  /// Outer folds run concurrently; results do not depend on this value.
  unsigned workers = 1;
};

struct ExperimentResult {
  EvaluationReport report;
  /// Similarity gamma used in each outer fold.
  std::vector<double> fold_gammas;
};

/// Per-fold metrics are rounded to the 6-decimal reporting precision before
/// aggregation, so a report's mean/std rows can be recomputed from its fold rows.
inline constexpr double kReportQuantum = 1e-6;

/// k-fold cross-validation over `data`.
ExperimentResult run_experiment(const TrainingSet& data, const ExperimentConfig& config);

/// Loads `config.data_path` and runs the cross-validation.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace sml
