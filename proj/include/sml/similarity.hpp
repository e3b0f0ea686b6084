#pragma once

#include <span>
#include <string_view>

#include "sml/dataset.hpp"

namespace sml {

enum class SimilarityKind { kRbf, kPolynomial };

/// Parameters of the pairwise similarity Φ. RBF uses `gamma`; polynomial uses
/// `c` and `degree`. Polynomial with degree 1 is linear SML, degree 2 quadratic.
struct SimilarityConfig {
  SimilarityKind kind = SimilarityKind::kRbf;
  double gamma = 1.0;
  double c = 1.0;
  int degree = 2;

  static SimilarityConfig rbf(double gamma) { return {SimilarityKind::kRbf, gamma, 1.0, 2}; }
  static SimilarityConfig polynomial(double c = 1.0, int degree = 2) {
    return {SimilarityKind::kPolynomial, 1.0, c, degree};
  }

  /// Throws std::invalid_argument when the parameters for `kind` are out of range.
  void validate() const;

  friend bool operator==(const SimilarityConfig&, const SimilarityConfig&) = default;
};

SimilarityKind parse_similarity_kind(std::string_view name);
std::string_view to_string(SimilarityKind kind);

/// exp(-gamma * ||a - b||^2)
double rbf(std::span<const double> a, std::span<const double> b, double gamma);

/// (<a, b> + c)^degree
double polynomial(std::span<const double> a, std::span<const double> b, double c, int degree);

double evaluate(const SimilarityConfig& config, std::span<const double> a,
                std::span<const double> b);

inline double evaluate(const SimilarityConfig& config, const FeatureVector& a,
                       const FeatureVector& b) {
  return evaluate(config, a.values(), b.values());
}

}  // namespace sml
