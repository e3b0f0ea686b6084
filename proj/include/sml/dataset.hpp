#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace sml {

/// Label ids are 1-based, as in the input files.
using LabelId = int;

/// Dense real feature vector. Vectors produced by `normalize` or by the
/// loaders have unit L2 norm; the type itself does not enforce it so that
/// raw vectors can flow through the similarity functions.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {}
  FeatureVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

/// Sorted, duplicate-free set of label ids.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<LabelId> members);
  LabelSet(std::initializer_list<LabelId> members) : LabelSet(std::vector<LabelId>(members)) {}

  bool contains(LabelId k) const noexcept;
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  std::span<const LabelId> members() const noexcept { return members_; }

  /// {1..label_count} \ this
  LabelSet complement(int label_count) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<LabelId> members_;
};

struct Instance {
  FeatureVector features;
  LabelSet labels;
};

/// Immutable multi-label training data with the per-label index D_k.
///
/// Instance ids are 0-based positions in `instances()`.
class TrainingSet {
 public:
  /// Validates that every vector has `feature_count` entries and every label
  /// lies in 1..label_count, then builds the label index.
  TrainingSet(std::vector<Instance> instances, std::size_t feature_count, int label_count);

  std::size_t size() const noexcept { return instances_.size(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  int label_count() const noexcept { return label_count_; }
  double avg_cardinality() const noexcept { return avg_cardinality_; }

  std::span<const Instance> instances() const noexcept { return instances_; }
  const Instance& operator[](std::size_t id) const { return instances_[id]; }

  /// Ids of the instances carrying label k, ascending. Throws std::out_of_range
  /// unless 1 <= k <= label_count.
  std::span<const std::size_t> label_subset(LabelId k) const;

  /// New training set holding the given instances in the given order.
  TrainingSet subset(std::span<const std::size_t> ids) const;

 private:
  std::vector<Instance> instances_;
  std::size_t feature_count_;
  int label_count_;
  double avg_cardinality_ = 0.0;
  std::vector<std::vector<std::size_t>> label_index_;
};

enum class DataFormat { kMultilabelSvm, kCsv };

DataFormat parse_data_format(std::string_view name);
std::string_view to_string(DataFormat format);

struct LoadOptions {
  /// When non-zero, the feature dimension is fixed to this value and any
  /// feature index beyond it is a dimension error.
  std::size_t feature_count = 0;
  /// When non-zero, the label space is at least this large.
  int label_count = 0;
};

/// Reads a dataset, normalizing every feature vector to unit length.
TrainingSet load_dataset(const std::filesystem::path& path, DataFormat format,
                         const LoadOptions& options = {});

/// Same as `load_dataset` on in-memory text.
TrainingSet parse_dataset(std::string_view text, DataFormat format,
                          const LoadOptions& options = {});

/// v / ||v||_2. Throws ZeroNormError when the norm is zero.
FeatureVector normalize(std::span<const double> values);
inline FeatureVector normalize(const FeatureVector& v) { return normalize(v.values()); }

struct FoldPlan {
  int fold_count = 0;
  std::uint64_t seed = 0;
  /// assignment[instance id] = fold id in [0, fold_count)
  std::vector<int> assignment;

  std::vector<std::size_t> test_ids(int fold) const;
  std::vector<std::size_t> train_ids(int fold) const;
};

/// Shuffles ids with a seeded generator and deals them round-robin.
FoldPlan split_folds(std::size_t instance_count, int fold_count, std::uint64_t seed);
inline FoldPlan split_folds(const TrainingSet& data, int fold_count, std::uint64_t seed) {
  return split_folds(data.size(), fold_count, seed);
}

/// Seeded permutation of 0..count-1.
std::vector<std::size_t> shuffled_ids(std::size_t count, std::uint64_t seed);

/// Independent child seed for a numbered sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace sml
