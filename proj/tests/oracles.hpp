#pragma once

// Independent reference implementations used only by the tests. They follow
// the textbook definitions by enumeration and share no code with the library
// beyond the plain data types.

#include <algorithm>
#include <bitset>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "sml/dataset.hpp"
#include "sml/scoring.hpp"
#include "sml/similarity.hpp"

namespace sml::oracle {

inline bool member(const LabelSet& y, LabelId k) {
  for (LabelId m : y) {
    if (m == k) return true;
  }
  return false;
}

/// Rank of label k by counting the labels placed ahead of it.
inline int rank_of(const ScoreVector& f, LabelId k) {
  int ahead = 0;
  for (LabelId q = 1; q <= f.label_count(); ++q) {
    if (f.label(q) > f.label(k) || (f.label(q) == f.label(k) && q < k)) ++ahead;
  }
  return ahead + 1;
}

inline double hamming(const std::vector<LabelSet>& pred, const std::vector<LabelSet>& truth, int label_count) {
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::bitset<64> a, b;
    for (LabelId k : pred[i]) a.set(static_cast<std::size_t>(k));
    for (LabelId k : truth[i]) b.set(static_cast<std::size_t>(k));
    total += static_cast<double>((a ^ b).count()) / label_count;
  }
  return total / static_cast<double>(pred.size());
}

inline double one_error(const std::vector<ScoreVector>& f, const std::vector<LabelSet>& truth) {
  double miss = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (truth[i].empty()) continue;
    ++counted;
    for (LabelId k = 1; k <= f[i].label_count(); ++k) {
      if (rank_of(f[i], k) == 1 && !member(truth[i], k)) miss += 1.0;
    }
  }
  return counted ? miss / counted : 0.0;
}

inline double coverage(const std::vector<ScoreVector>& f, const std::vector<LabelSet>& truth) {
  double total = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (truth[i].empty()) continue;
    ++counted;
    int deepest = 0;
    for (LabelId k = 1; k <= f[i].label_count(); ++k) {
      if (member(truth[i], k)) deepest = std::max(deepest, rank_of(f[i], k));
    }
    total += deepest - 1;
  }
  return counted ? total / counted : 0.0;
}

inline double ranking_loss(const std::vector<ScoreVector>& f, const std::vector<LabelSet>& truth) {
  double total = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int label_count = f[i].label_count();
    int pairs = 0, bad = 0;
    for (LabelId k = 1; k <= label_count; ++k) {
      for (LabelId q = 1; q <= label_count; ++q) {
        if (member(truth[i], k) && !member(truth[i], q)) {
          ++pairs;
          if (f[i].label(k) <= f[i].label(q)) ++bad;
        }
      }
    }
    if (pairs == 0) continue;
    ++counted;
    total += static_cast<double>(bad) / pairs;
  }
  return counted ? total / counted : 0.0;
}

inline double average_precision(const std::vector<ScoreVector>& f, const std::vector<LabelSet>& truth) {
  double total = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (truth[i].empty()) continue;
    ++counted;
    double inner = 0.0;
    for (LabelId k = 1; k <= f[i].label_count(); ++k) {
      if (!member(truth[i], k)) continue;
      int above = 0;
      for (LabelId q = 1; q <= f[i].label_count(); ++q) {
        if (member(truth[i], q) && rank_of(f[i], q) <= rank_of(f[i], k)) ++above;
      }
      inner += static_cast<double>(above) / rank_of(f[i], k);
    }
    total += inner / static_cast<double>(truth[i].size());
  }
  return counted ? total / counted : 0.0;
}

/// Residual sum of squares of the dense least-squares solution of
/// [F 1] theta ~ t, computed by complete orthogonal decomposition.
inline double dense_lsq_rss(const std::vector<ScoreVector>& rows, const std::vector<double>& targets) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index dim = rows.front().label_count() + 1;
  Eigen::MatrixXd a(n, dim);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k + 1 < dim; ++k) a(i, k) = rows[static_cast<std::size_t>(i)].values()[static_cast<std::size_t>(k)];
    a(i, dim - 1) = 1.0;
    t(i) = targets[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd theta = a.completeOrthogonalDecomposition().solve(t);
  return (a * theta - t).squaredNorm();
}

/// Multi-class similarity-sum rule: class c wins when the summed similarity
/// of training points of class c is largest; smallest class id on ties.
inline int multiclass_argmax(const std::vector<FeatureVector>& points, const std::vector<int>& classes,
                             int class_count, const SimilarityConfig& sim, const FeatureVector& x) {
  std::vector<double> sums(static_cast<std::size_t>(class_count) + 1, 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    double phi = 0.0;
    if (sim.kind == SimilarityKind::kRbf) {
      double sq = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) sq += (x[d] - points[j][d]) * (x[d] - points[j][d]);
      phi = std::exp(-sim.gamma * sq);
    } else {
      double dot = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) dot += x[d] * points[j][d];
      phi = std::pow(dot + sim.c, sim.degree);
    }
    sums[static_cast<std::size_t>(classes[j])] += phi;
  }
  int best = 1;
  for (int c = 2; c <= class_count; ++c) {
    if (sums[static_cast<std::size_t>(c)] > sums[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

}  // namespace sml::oracle
