#include "sml/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "sml/errors.hpp"

namespace sml {

Decoder parse_decoder(std::string_view name) {
  if (name == "setsize") return Decoder::kSetSize;
  if (name == "threshold") return Decoder::kThreshold;
  throw std::invalid_argument(fmt::format("unknown decoder '{}'", name));
}

std::string_view to_string(Decoder decoder) {
  return decoder == Decoder::kSetSize ? "setsize" : "threshold";
}

SizeModel fit_size_model(std::shared_ptr<const TrainingSet> training, const SimilarityConfig& similarity) {
  if (!training || training->size() == 0) throw std::invalid_argument("empty training set");
  similarity.validate();
  SizeModel model;
  for (const Instance& inst : training->instances()) {
    model.size_classes_.push_back(static_cast<int>(inst.labels.size()));
  }
  std::sort(model.size_classes_.begin(), model.size_classes_.end());
  model.size_classes_.erase(std::unique(model.size_classes_.begin(), model.size_classes_.end()),
                            model.size_classes_.end());
  model.class_of_.reserve(training->size());
  for (const Instance& inst : training->instances()) {
    const auto it = std::lower_bound(model.size_classes_.begin(), model.size_classes_.end(),
                                     static_cast<int>(inst.labels.size()));
    model.class_of_.push_back(static_cast<std::size_t>(it - model.size_classes_.begin()));
  }
  model.training_ = std::move(training);
  model.similarity_ = similarity;
  return model;
}

SizeModel fit_size_model(const TrainingSet& training, const SimilarityConfig& similarity) {
  return fit_size_model(std::make_shared<const TrainingSet>(training), similarity);
}

int predict_size(const SizeModel& model, const FeatureVector& x) {
  const TrainingSet& data = model.training();
  if (x.size() != data.feature_count()) {
    throw DimensionMismatch(
        fmt::format("query has {} features, model expects {}", x.size(), data.feature_count()));
  }
  std::vector<double> sums(model.size_classes().size(), 0.0);
  const auto class_of = model.class_of();
  for (std::size_t id = 0; id < data.size(); ++id) {
    sums[class_of[id]] += evaluate(model.similarity(), x, data[id].features);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < sums.size(); ++c) {
    if (sums[c] > sums[best]) best = c;
  }
  return model.size_classes()[best];
}

LabelSet decode_topk(const ScoreVector& scores, int size) {
  const int label_count = scores.label_count();
  if (size < 0 || size > label_count) {
    throw std::out_of_range(fmt::format("set size {} outside 0..{}", size, label_count));
  }
  std::vector<LabelId> order(static_cast<std::size_t>(label_count));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](LabelId a, LabelId b) { return scores.label(a) > scores.label(b); });
  order.resize(static_cast<std::size_t>(size));
  return LabelSet(std::move(order));
}

int threshold_errors(const ScoreVector& scores, const LabelSet& truth, double tau) {
  int errors = 0;
  for (LabelId k = 1; k <= scores.label_count(); ++k) {
    const double f = scores.label(k);
    if (truth.contains(k) ? f <= tau : f >= tau) ++errors;
  }
  return errors;
}

double compute_s_target(const ScoreVector& scores, const LabelSet& truth) {
  if (scores.label_count() < 1) throw std::invalid_argument("empty score vector");
  for (LabelId k : truth) {
    if (k < 1 || k > scores.label_count()) {
      throw std::out_of_range(fmt::format("label {} outside 1..{}", k, scores.label_count()));
    }
  }

  std::vector<double> distinct(scores.values().begin(), scores.values().end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  struct Candidate {
    double tau;
    double width;
  };
  constexpr double kUnbounded = std::numeric_limits<double>::infinity();
  std::vector<Candidate> candidates;
  candidates.reserve(distinct.size() + 1);
  candidates.push_back({distinct.front() - 1.0, kUnbounded});
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    candidates.push_back({0.5 * (distinct[i] + distinct[i + 1]), distinct[i + 1] - distinct[i]});
  }
  candidates.push_back({distinct.back() + 1.0, kUnbounded});

  // Candidates ascend in τ, so >= on width resolves the last tie upward.
  const Candidate* best = nullptr;
  int best_errors = std::numeric_limits<int>::max();
  for (const Candidate& cand : candidates) {
    const int errors = threshold_errors(scores, truth, cand.tau);
    if (errors < best_errors || (errors == best_errors && cand.width >= best->width)) {
      best = &cand;
      best_errors = errors;
    }
  }
  return best->tau;
}

double ThresholdModel::threshold(const ScoreVector& scores) const {
  if (static_cast<std::size_t>(scores.label_count()) != weights.size()) {
    throw DimensionMismatch(fmt::format("score vector has {} labels, threshold model expects {}",
                                        scores.label_count(), weights.size()));
  }
  double t = bias;
  for (std::size_t k = 0; k < weights.size(); ++k) t += weights[k] * scores.values()[k];
  return t;
}

namespace {

// In-place Cholesky solve of the symmetric positive definite system a x = b.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t dim) {
  for (std::size_t j = 0; j < dim; ++j) {
    double diag = a[j * dim + j];
    for (std::size_t p = 0; p < j; ++p) diag -= a[j * dim + p] * a[j * dim + p];
    if (!(diag > 0.0)) throw std::runtime_error("threshold normal equations are not positive definite");
    const double pivot = std::sqrt(diag);
    a[j * dim + j] = pivot;
    for (std::size_t i = j + 1; i < dim; ++i) {
      double v = a[i * dim + j];
      for (std::size_t p = 0; p < j; ++p) v -= a[i * dim + p] * a[j * dim + p];
      a[i * dim + j] = v / pivot;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    double v = b[i];
    for (std::size_t p = 0; p < i; ++p) v -= a[i * dim + p] * b[p];
    b[i] = v / a[i * dim + i];
  }
  for (std::size_t i = dim; i-- > 0;) {
    double v = b[i];
    for (std::size_t p = i + 1; p < dim; ++p) v -= a[p * dim + i] * b[p];
    b[i] = v / a[i * dim + i];
  }
  return b;
}

}  // namespace

ThresholdModel fit_threshold(std::span<const ScoreVector> rows, std::span<const double> targets,
                             double ridge) {
  if (rows.empty()) throw std::invalid_argument("fit_threshold needs at least one row");
  if (rows.size() != targets.size()) {
    throw DimensionMismatch(
        fmt::format("{} score rows but {} targets", rows.size(), targets.size()));
  }
  const std::size_t label_count = static_cast<std::size_t>(rows.front().label_count());
  const std::size_t dim = label_count + 1;

  // Augmented design row is [f_1 .. f_K, 1].
  std::vector<double> gram(dim * dim, 0.0);
  std::vector<double> rhs(dim, 0.0);
  std::vector<double> design(dim, 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<std::size_t>(rows[i].label_count()) != label_count) {
      throw DimensionMismatch(fmt::format("score row {} has {} labels, expected {}", i,
                                          rows[i].label_count(), label_count));
    }
    std::copy(rows[i].values().begin(), rows[i].values().end(), design.begin());
    for (std::size_t r = 0; r < dim; ++r) {
      rhs[r] += design[r] * targets[i];
      for (std::size_t c = 0; c <= r; ++c) gram[r * dim + c] += design[r] * design[c];
    }
  }
  for (std::size_t r = 0; r < dim; ++r) {
    gram[r * dim + r] += ridge;
    for (std::size_t c = 0; c < r; ++c) gram[c * dim + r] = gram[r * dim + c];
  }

  std::vector<double> solution = cholesky_solve(std::move(gram), std::move(rhs), dim);
  ThresholdModel model;
  model.bias = solution.back();
  solution.pop_back();
  model.weights = std::move(solution);
  return model;
}

LabelSet decode_threshold(const ScoreVector& scores, const ThresholdModel& model) {
  const double t = model.threshold(scores);
  std::vector<LabelId> picked;
  for (LabelId k = 1; k <= scores.label_count(); ++k) {
    if (scores.label(k) > t) picked.push_back(k);
  }
  return LabelSet(std::move(picked));
}

}  // namespace sml
