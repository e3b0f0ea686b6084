#include "sml/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "sml/parallel.hpp"

namespace sml {

TuningScope parse_tuning_scope(std::string_view name) {
  if (name == "pool") return TuningScope::kTrainingPool;
  if (name == "subset") return TuningScope::kSubsetOnly;
  throw std::invalid_argument(fmt::format("unknown tuning scope '{}'", name));
}

std::string_view to_string(TuningScope scope) {
  return scope == TuningScope::kTrainingPool ? "pool" : "subset";
}

void TuningPlan::validate() const {
  if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
  for (double g : gamma_grid) SimilarityConfig::rbf(g).validate();
  if (inner_folds < 2) throw std::invalid_argument("inner folds must be >= 2");
  if (!(tuning_fraction > 0.0 && tuning_fraction <= 1.0)) {
    throw std::invalid_argument(fmt::format("tuning fraction {} outside (0, 1]", tuning_fraction));
  }
}

void ModelConfig::validate() const {
  if (auto_gamma) {
    if (similarity.kind != SimilarityKind::kRbf) {
      throw std::invalid_argument("automatic gamma tuning requires the rbf similarity");
    }
    tuning.validate();
  } else {
    similarity.validate();
  }
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw std::invalid_argument(fmt::format("sampling fraction {} outside (0, 1]", sample_fraction));
  }
}

namespace {

std::vector<FeatureVector> features_of(const TrainingSet& data) {
  std::vector<FeatureVector> out;
  out.reserve(data.size());
  for (const Instance& inst : data.instances()) out.push_back(inst.features);
  return out;
}

std::vector<LabelSet> labels_of(const TrainingSet& data) {
  std::vector<LabelSet> out;
  out.reserve(data.size());
  for (const Instance& inst : data.instances()) out.push_back(inst.labels);
  return out;
}

double criterion_value(Metric metric, std::span<const ScoreVector> scores,
                       std::span<const LabelSet> predicted, std::span<const LabelSet> truth,
                       int label_count) {
  switch (metric) {
    case Metric::kHammingLoss: return hamming_loss(predicted, truth, label_count);
    case Metric::kOneError: return one_error(scores, truth).value;
    case Metric::kCoverage: return coverage(scores, truth).value;
    case Metric::kRankingLoss: return ranking_loss(scores, truth).value;
    case Metric::kAveragePrecision: return average_precision(scores, truth).value;
  }
  return 0.0;
}

struct InnerFold {
  std::shared_ptr<const TrainingSet> training;
  std::vector<FeatureVector> queries;
  std::vector<LabelSet> truth;
};

double quantize(double value) { return std::round(value / kReportQuantum) * kReportQuantum; }

}  // namespace

TuningResult tune_gamma_detailed(const TrainingSet& data, const TuningPlan& plan, std::uint64_t seed,
                                 unsigned workers) {
  plan.validate();
  const std::vector<std::size_t> subset = sample_ids(data.size(), plan.tuning_fraction, derive_seed(seed, 0));
  if (subset.size() < static_cast<std::size_t>(plan.inner_folds)) {
    throw std::invalid_argument(fmt::format("tuning subset has {} instances, fewer than {} inner folds",
                                            subset.size(), plan.inner_folds));
  }
  const FoldPlan inner = split_folds(subset.size(), plan.inner_folds, derive_seed(seed, 1));

  std::vector<InnerFold> folds(static_cast<std::size_t>(plan.inner_folds));
  for (int f = 0; f < plan.inner_folds; ++f) {
    std::vector<bool> held_out(data.size(), false);
    std::vector<std::size_t> validation;
    for (std::size_t pos : inner.test_ids(f)) {
      validation.push_back(subset[pos]);
      held_out[subset[pos]] = true;
    }
    std::vector<std::size_t> train_ids;
    if (plan.scope == TuningScope::kTrainingPool) {
      for (std::size_t id = 0; id < data.size(); ++id) {
        if (!held_out[id]) train_ids.push_back(id);
      }
    } else {
      for (std::size_t id : subset) {
        if (!held_out[id]) train_ids.push_back(id);
      }
    }
    InnerFold& fold = folds[static_cast<std::size_t>(f)];
    fold.training = std::make_shared<const TrainingSet>(data.subset(train_ids));
    const TrainingSet held = data.subset(validation);
    fold.queries = features_of(held);
    fold.truth = labels_of(held);
  }

  const bool needs_predictions = plan.criterion == Metric::kHammingLoss;
  TuningResult result;
  result.criterion_values.assign(plan.gamma_grid.size(), 0.0);
  parallel_for(plan.gamma_grid.size(), workers, [&](std::size_t g) {
    const SimilarityConfig similarity = SimilarityConfig::rbf(plan.gamma_grid[g]);
    double total = 0.0;
    for (const InnerFold& fold : folds) {
      const SmlModel model = fit(fold.training, similarity);
      const std::vector<ScoreVector> scores = score_batch(model, fold.queries);
      std::vector<LabelSet> predicted;
      if (needs_predictions) {
        const SizeModel sizes = fit_size_model(fold.training, similarity);
        for (std::size_t i = 0; i < scores.size(); ++i) {
          predicted.push_back(decode_topk(scores[i], predict_size(sizes, fold.queries[i])));
        }
      }
      total += criterion_value(plan.criterion, scores, predicted, fold.truth, data.label_count());
    }
    result.criterion_values[g] = total / static_cast<double>(folds.size());
  });

  const bool maximize = higher_is_better(plan.criterion);
  std::size_t best = 0;
  for (std::size_t g = 1; g < plan.gamma_grid.size(); ++g) {
    const double cand = result.criterion_values[g];
    const double incumbent = result.criterion_values[best];
    const bool better = maximize ? cand > incumbent : cand < incumbent;
    const bool tie_smaller = cand == incumbent && plan.gamma_grid[g] < plan.gamma_grid[best];
    if (better || tie_smaller) best = g;
  }
  result.gamma = plan.gamma_grid[best];
  return result;
}

double tune_gamma(const TrainingSet& data, const TuningPlan& plan, std::uint64_t seed, unsigned workers) {
  return tune_gamma_detailed(data, plan, seed, workers).gamma;
}

Predictor Predictor::train(std::shared_ptr<const TrainingSet> training, const ModelConfig& config,
                           std::uint64_t seed, unsigned workers) {
  config.validate();
  if (!training || training->size() == 0) throw std::invalid_argument("empty training set");

  SimilarityConfig similarity = config.similarity;
  if (config.auto_gamma) similarity.gamma = tune_gamma(*training, config.tuning, derive_seed(seed, 1), workers);

  std::optional<Sampling> sampling;
  if (config.sample_fraction < 1.0) sampling = Sampling{config.sample_fraction, derive_seed(seed, 2)};

  Predictor predictor(fit(std::move(training), similarity, sampling), config.decoder);
  const auto fitted = predictor.model_.training_ptr();
  if (config.decoder == Decoder::kSetSize) {
    predictor.size_model_ = fit_size_model(fitted, similarity);
  } else {
    // In-sample score rows: each training instance is scored against a set that contains it.
    const std::vector<FeatureVector> queries = features_of(*fitted);
    const std::vector<ScoreVector> rows = score_batch(predictor.model_, queries, workers);
    std::vector<double> targets(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) targets[i] = compute_s_target(rows[i], (*fitted)[i].labels);
    predictor.threshold_model_ = fit_threshold(rows, targets);
  }
  return predictor;
}

std::vector<Prediction> Predictor::predict(std::span<const FeatureVector> queries, unsigned workers) const {
  std::vector<ScoreVector> scores = score_batch(model_, queries, workers);
  std::vector<Prediction> out(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    out[i].labels = decoder_ == Decoder::kSetSize
                        ? decode_topk(scores[i], predict_size(*size_model_, queries[i]))
                        : decode_threshold(scores[i], *threshold_model_);
    out[i].scores = std::move(scores[i]);
  });
  return out;
}

ExperimentResult run_experiment(const TrainingSet& data, const ExperimentConfig& config) {
  config.model.validate();
  const FoldPlan plan = split_folds(data, config.fold_count, config.seed);

  std::vector<FoldMetrics> per_fold(static_cast<std::size_t>(config.fold_count));
  std::vector<double> gammas(per_fold.size());
  parallel_for(per_fold.size(), config.workers, [&](std::size_t f) {
    const int fold = static_cast<int>(f);
    try {
      auto training = std::make_shared<const TrainingSet>(data.subset(plan.train_ids(fold)));
      const TrainingSet test = data.subset(plan.test_ids(fold));
      const Predictor predictor = Predictor::train(training, config.model, derive_seed(config.seed, f + 1));
      const std::vector<Prediction> predictions = predictor.predict(features_of(test));

      std::vector<ScoreVector> scores;
      std::vector<LabelSet> predicted;
      for (const Prediction& p : predictions) {
        scores.push_back(p.scores);
        predicted.push_back(p.labels);
      }
      FoldMetrics metrics = evaluate_all(scores, predicted, labels_of(test), data.label_count());
      for (Metric m : kAllMetrics) metrics.get(m) = quantize(metrics.get(m));
      per_fold[f] = metrics;
      gammas[f] = predictor.model().similarity().gamma;
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("fold {}: {}", fold + 1, e.what()));
    }
  });

  ExperimentResult result;
  result.report = aggregate_folds(per_fold);
  result.fold_gammas = std::move(gammas);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(load_dataset(config.data_path, config.format), config);
}

}  // namespace sml
