#include "sml/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "sml/errors.hpp"
#include "sml/parallel.hpp"

namespace sml {

namespace {

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument(fmt::format("sampling fraction {} outside (0, 1]", fraction));
  }
}

void check_query(const SmlModel& model, const FeatureVector& x) {
  if (x.size() != model.feature_count()) {
    throw DimensionMismatch(
        fmt::format("query has {} features, model expects {}", x.size(), model.feature_count()));
  }
}

}  // namespace

std::vector<std::size_t> sample_ids(std::size_t count, double fraction, std::uint64_t seed) {
  check_fraction(fraction);
  // Slack absorbs products such as 0.7 * 10 = 7.000000000000001.
  const double wanted = std::ceil(fraction * static_cast<double>(count) - 1e-9);
  const auto take = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(wanted, 1.0)), 1, count);
  std::vector<std::size_t> ids = shuffled_ids(count, seed);
  ids.resize(take);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TrainingSet sample_training(const TrainingSet& training, double fraction, std::uint64_t seed) {
  return training.subset(sample_ids(training.size(), fraction, seed));
}

SmlModel fit(std::shared_ptr<const TrainingSet> training, const SimilarityConfig& similarity,
             const std::optional<Sampling>& sampling) {
  if (!training || training->size() == 0) throw std::invalid_argument("empty training set");
  similarity.validate();
  if (sampling) {
    check_fraction(sampling->fraction);
    if (sampling->fraction < 1.0) {
      training = std::make_shared<const TrainingSet>(
          sample_training(*training, sampling->fraction, sampling->seed));
    }
  }
  return SmlModel(std::move(training), similarity, sampling);
}

SmlModel fit(const TrainingSet& training, const SimilarityConfig& similarity,
             const std::optional<Sampling>& sampling) {
  return fit(std::make_shared<const TrainingSet>(training), similarity, sampling);
}

double score_label(const SmlModel& model, const FeatureVector& x, LabelId k) {
  check_query(model, x);
  const TrainingSet& data = model.training();
  double sum = 0.0;
  for (std::size_t id : data.label_subset(k)) {
    sum += evaluate(model.similarity(), x, data[id].features);
  }
  return sum;
}

ScoreVector score_all(const SmlModel& model, const FeatureVector& x) {
  check_query(model, x);
  const TrainingSet& data = model.training();
  ScoreVector scores(static_cast<std::size_t>(data.label_count()));
  for (const Instance& inst : data.instances()) {
    if (inst.labels.empty()) continue;
    const double phi = evaluate(model.similarity(), x, inst.features);
    for (LabelId k : inst.labels) scores.label(k) += phi;
  }
  return scores;
}

std::vector<ScoreVector> score_batch(const SmlModel& model, std::span<const FeatureVector> queries,
                                     unsigned workers) {
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].size() != model.feature_count()) {
      throw DimensionMismatch(fmt::format("query {} has {} features, model expects {}", i,
                                          queries[i].size(), model.feature_count()));
    }
  }
  std::vector<ScoreVector> out(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) { out[i] = score_all(model, queries[i]); });
  return out;
}

}  // namespace sml
