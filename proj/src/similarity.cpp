#include "sml/similarity.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "sml/errors.hpp"

namespace sml {

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(fmt::format("similarity between vectors of size {} and {}", a.size(), b.size()));
  }
}

// Exponentiation by squaring keeps integer powers exact for small inputs.
double int_pow(double base, int exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

void SimilarityConfig::validate() const {
  switch (kind) {
    case SimilarityKind::kRbf:
      if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument(fmt::format("rbf gamma must be positive, got {}", gamma));
      }
      return;
    case SimilarityKind::kPolynomial:
      if (degree < 1) throw std::invalid_argument(fmt::format("polynomial degree must be >= 1, got {}", degree));
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument(fmt::format("polynomial c must be non-negative, got {}", c));
      }
      return;
  }
}

SimilarityKind parse_similarity_kind(std::string_view name) {
  if (name == "rbf") return SimilarityKind::kRbf;
  if (name == "poly" || name == "polynomial") return SimilarityKind::kPolynomial;
  throw std::invalid_argument(fmt::format("unknown similarity '{}'", name));
}

std::string_view to_string(SimilarityKind kind) {
  return kind == SimilarityKind::kRbf ? "rbf" : "poly";
}

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  check_dims(a, b);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::exp(-gamma * sq);
}

double polynomial(std::span<const double> a, std::span<const double> b, double c, int degree) {
  check_dims(a, b);
  if (degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return int_pow(dot + c, degree);
}

double evaluate(const SimilarityConfig& config, std::span<const double> a,
                std::span<const double> b) {
  if (config.kind == SimilarityKind::kRbf) return rbf(a, b, config.gamma);
  return polynomial(a, b, config.c, config.degree);
}

}  // namespace sml
