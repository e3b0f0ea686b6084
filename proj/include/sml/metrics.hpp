#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sml/dataset.hpp"
#include "sml/scoring.hpp"

namespace sml {

/// rank[k - 1] is the 1-based position of label k when labels are sorted by
/// descending score; equal scores are ordered by ascending label id.
using RankVector = std::vector<int>;

RankVector rank_labels(const ScoreVector& scores);

/// Label with the highest score, smallest id on ties.
LabelId top_label(const ScoreVector& scores);

/// Metric value together with how many instances entered the average and how
/// many were skipped because the formula is undefined for them. When every
/// instance is skipped the value is 0.
struct MetricValue {
  double value = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

double hamming_loss(std::span<const LabelSet> predicted, std::span<const LabelSet> truth, int label_count);

/// Instances with an empty truth set are skipped.
MetricValue one_error(std::span<const ScoreVector> scores, std::span<const LabelSet> truth);

/// Mean over instances of (deepest rank among the relevant labels) - 1.
/// Instances with an empty truth set are skipped.
MetricValue coverage(std::span<const ScoreVector> scores, std::span<const LabelSet> truth);

/// Fraction of (relevant, irrelevant) pairs with f_relevant <= f_irrelevant.
/// Instances with no relevant or no irrelevant label are skipped.
MetricValue ranking_loss(std::span<const ScoreVector> scores, std::span<const LabelSet> truth);

/// Instances with an empty truth set are skipped.
MetricValue average_precision(std::span<const ScoreVector> scores, std::span<const LabelSet> truth);

enum class Metric { kHammingLoss, kOneError, kCoverage, kRankingLoss, kAveragePrecision };

inline constexpr Metric kAllMetrics[] = {Metric::kHammingLoss, Metric::kOneError, Metric::kCoverage,
                                         Metric::kRankingLoss, Metric::kAveragePrecision};

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);
bool higher_is_better(Metric metric) noexcept;

struct FoldMetrics {
  double hamming_loss = 0.0;
  double one_error = 0.0;
  double coverage = 0.0;
  double ranking_loss = 0.0;
  double average_precision = 0.0;

  double get(Metric metric) const noexcept;
  double& get(Metric metric) noexcept;

  friend bool operator==(const FoldMetrics&, const FoldMetrics&) = default;
};

/// All five criteria for one evaluation split.
FoldMetrics evaluate_all(std::span<const ScoreVector> scores, std::span<const LabelSet> predicted,
                         std::span<const LabelSet> truth, int label_count);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

/// Per-metric mean and sample standard deviation over folds.
struct EvaluationReport {
  MetricSummary hamming_loss;
  MetricSummary one_error;
  MetricSummary coverage;
  MetricSummary ranking_loss;
  MetricSummary average_precision;
  std::vector<FoldMetrics> folds;

  const MetricSummary& get(Metric metric) const noexcept;
  MetricSummary& get(Metric metric) noexcept;
};

/// Mean and (n - 1)-denominator standard deviation; std is 0 for one fold.
EvaluationReport aggregate_folds(std::span<const FoldMetrics> per_fold);

}  // namespace sml
