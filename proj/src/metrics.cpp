#include "sml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace sml {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument(fmt::format("length mismatch: {} vs {}", a, b));
}

template <typename PerInstance>
MetricValue average_over(std::span<const ScoreVector> scores, std::span<const LabelSet> truth,
                         PerInstance&& per_instance) {
  check_lengths(scores.size(), truth.size());
  MetricValue out;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double value = 0.0;
    if (per_instance(scores[i], truth[i], value)) {
      total += value;
      ++out.evaluated;
    } else {
      ++out.skipped;
    }
  }
  if (out.evaluated > 0) out.value = total / static_cast<double>(out.evaluated);
  return out;
}

}  // namespace

RankVector rank_labels(const ScoreVector& scores) {
  std::vector<LabelId> order(static_cast<std::size_t>(scores.label_count()));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](LabelId a, LabelId b) { return scores.label(a) > scores.label(b); });
  RankVector rank(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    rank[static_cast<std::size_t>(order[pos] - 1)] = static_cast<int>(pos + 1);
  }
  return rank;
}

LabelId top_label(const ScoreVector& scores) {
  if (scores.label_count() < 1) throw std::invalid_argument("empty score vector");
  LabelId best = 1;
  for (LabelId k = 2; k <= scores.label_count(); ++k) {
    if (scores.label(k) > scores.label(best)) best = k;
  }
  return best;
}

double hamming_loss(std::span<const LabelSet> predicted, std::span<const LabelSet> truth, int label_count) {
  check_lengths(predicted.size(), truth.size());
  if (predicted.empty()) throw std::invalid_argument("hamming loss of zero instances");
  if (label_count < 1) throw std::invalid_argument("label count must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    std::vector<LabelId> diff;
    std::set_symmetric_difference(predicted[i].begin(), predicted[i].end(), truth[i].begin(),
                                  truth[i].end(), std::back_inserter(diff));
    total += static_cast<double>(diff.size()) / label_count;
  }
  return total / static_cast<double>(predicted.size());
}

MetricValue one_error(std::span<const ScoreVector> scores, std::span<const LabelSet> truth) {
  return average_over(scores, truth, [](const ScoreVector& f, const LabelSet& y, double& value) {
    if (y.empty()) return false;
    value = y.contains(top_label(f)) ? 0.0 : 1.0;
    return true;
  });
}

MetricValue coverage(std::span<const ScoreVector> scores, std::span<const LabelSet> truth) {
  return average_over(scores, truth, [](const ScoreVector& f, const LabelSet& y, double& value) {
    if (y.empty()) return false;
    const RankVector rank = rank_labels(f);
    int deepest = 0;
    for (LabelId k : y) deepest = std::max(deepest, rank[static_cast<std::size_t>(k - 1)]);
    value = deepest - 1;
    return true;
  });
}

MetricValue ranking_loss(std::span<const ScoreVector> scores, std::span<const LabelSet> truth) {
  return average_over(scores, truth, [](const ScoreVector& f, const LabelSet& y, double& value) {
    const std::size_t relevant = y.size();
    const std::size_t irrelevant = static_cast<std::size_t>(f.label_count()) - relevant;
    if (relevant == 0 || irrelevant == 0) return false;
    std::size_t bad = 0;
    for (LabelId k : y) {
      for (LabelId q = 1; q <= f.label_count(); ++q) {
        if (!y.contains(q) && f.label(k) <= f.label(q)) ++bad;
      }
    }
    value = static_cast<double>(bad) / static_cast<double>(relevant * irrelevant);
    return true;
  });
}

MetricValue average_precision(std::span<const ScoreVector> scores, std::span<const LabelSet> truth) {
  return average_over(scores, truth, [](const ScoreVector& f, const LabelSet& y, double& value) {
    if (y.empty()) return false;
    const RankVector rank = rank_labels(f);
    double sum = 0.0;
    for (LabelId k : y) {
      const int rk = rank[static_cast<std::size_t>(k - 1)];
      int at_or_above = 0;
      for (LabelId other : y) {
        if (rank[static_cast<std::size_t>(other - 1)] <= rk) ++at_or_above;
      }
      sum += static_cast<double>(at_or_above) / rk;
    }
    value = sum / static_cast<double>(y.size());
    return true;
  });
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument(fmt::format("unknown metric '{}'", name));
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kHammingLoss: return "hamming_loss";
    case Metric::kOneError: return "one_error";
    case Metric::kCoverage: return "coverage";
    case Metric::kRankingLoss: return "ranking_loss";
    case Metric::kAveragePrecision: return "average_precision";
  }
  return "unknown";
}

bool higher_is_better(Metric metric) noexcept { return metric == Metric::kAveragePrecision; }

double FoldMetrics::get(Metric metric) const noexcept {
  return const_cast<FoldMetrics*>(this)->get(metric);
}

double& FoldMetrics::get(Metric metric) noexcept {
  switch (metric) {
    case Metric::kHammingLoss: return hamming_loss;
    case Metric::kOneError: return one_error;
    case Metric::kCoverage: return coverage;
    case Metric::kRankingLoss: return ranking_loss;
    case Metric::kAveragePrecision: return average_precision;
  }
  return hamming_loss;
}

const MetricSummary& EvaluationReport::get(Metric metric) const noexcept {
  return const_cast<EvaluationReport*>(this)->get(metric);
}

MetricSummary& EvaluationReport::get(Metric metric) noexcept {
  switch (metric) {
    case Metric::kHammingLoss: return hamming_loss;
    case Metric::kOneError: return one_error;
    case Metric::kCoverage: return coverage;
    case Metric::kRankingLoss: return ranking_loss;
    case Metric::kAveragePrecision: return average_precision;
  }
  return hamming_loss;
}

FoldMetrics evaluate_all(std::span<const ScoreVector> scores, std::span<const LabelSet> predicted,
                         std::span<const LabelSet> truth, int label_count) {
  FoldMetrics out;
  out.hamming_loss = hamming_loss(predicted, truth, label_count);
  out.one_error = one_error(scores, truth).value;
  out.coverage = coverage(scores, truth).value;
  out.ranking_loss = ranking_loss(scores, truth).value;
  out.average_precision = average_precision(scores, truth).value;
  return out;
}

EvaluationReport aggregate_folds(std::span<const FoldMetrics> per_fold) {
  if (per_fold.empty()) throw std::invalid_argument("no folds to aggregate");
  EvaluationReport report;
  report.folds.assign(per_fold.begin(), per_fold.end());
  const double n = static_cast<double>(per_fold.size());
  for (Metric metric : kAllMetrics) {
    double sum = 0.0;
    for (const FoldMetrics& fold : per_fold) sum += fold.get(metric);
    const double mean = sum / n;
    double sq = 0.0;
    for (const FoldMetrics& fold : per_fold) {
      const double d = fold.get(metric) - mean;
      sq += d * d;
    }
    report.get(metric) = {mean, per_fold.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0};
  }
  return report;
}

}  // namespace sml
