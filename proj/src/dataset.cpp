#include "sml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "sml/errors.hpp"

namespace sml {

ParseError::ParseError(const std::string& message, std::size_t line)
    : std::runtime_error(line == 0 ? message : fmt::format("line {}: {}", line, message)), line_(line) {}

LabelSet::LabelSet(std::vector<LabelId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool LabelSet::contains(LabelId k) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), k);
}

LabelSet LabelSet::complement(int label_count) const {
  std::vector<LabelId> out;
  out.reserve(static_cast<std::size_t>(std::max(0, label_count)));
  for (LabelId k = 1; k <= label_count; ++k) {
    if (!contains(k)) out.push_back(k);
  }
  return LabelSet(std::move(out));
}

TrainingSet::TrainingSet(std::vector<Instance> instances, std::size_t feature_count, int label_count)
    : instances_(std::move(instances)),
      feature_count_(feature_count),
      label_count_(label_count),
      label_index_(static_cast<std::size_t>(std::max(0, label_count))) {
  if (label_count < 0) throw std::invalid_argument("label count must be non-negative");
  std::size_t label_total = 0;
  for (std::size_t id = 0; id < instances_.size(); ++id) {
    const Instance& inst = instances_[id];
    if (inst.features.size() != feature_count_) {
      throw DimensionMismatch(fmt::format("instance {} has {} features, expected {}", id,
                                          inst.features.size(), feature_count_));
    }
    for (LabelId k : inst.labels) {
      if (k < 1 || k > label_count_) {
        throw std::out_of_range(
            fmt::format("instance {} carries label {} outside 1..{}", id, k, label_count_));
      }
      label_index_[static_cast<std::size_t>(k - 1)].push_back(id);
    }
    label_total += inst.labels.size();
  }
  if (!instances_.empty()) {
    avg_cardinality_ = static_cast<double>(label_total) / static_cast<double>(instances_.size());
  }
}

std::span<const std::size_t> TrainingSet::label_subset(LabelId k) const {
  if (k < 1 || k > label_count_) {
    throw std::out_of_range(fmt::format("label {} outside 1..{}", k, label_count_));
  }
  return label_index_[static_cast<std::size_t>(k - 1)];
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> ids) const {
  std::vector<Instance> picked;
  picked.reserve(ids.size());
  for (std::size_t id : ids) picked.push_back(instances_.at(id));
  return TrainingSet(std::move(picked), feature_count_, label_count_);
}

DataFormat parse_data_format(std::string_view name) {
  if (name == "multilabel-svm" || name == "svm") return DataFormat::kMultilabelSvm;
  if (name == "csv") return DataFormat::kCsv;
  throw std::invalid_argument(fmt::format("unknown data format '{}'", name));
}

std::string_view to_string(DataFormat format) {
  return format == DataFormat::kCsv ? "csv" : "multilabel-svm";
}

FeatureVector normalize(std::span<const double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ZeroNormError("cannot normalize a zero-norm feature vector");
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v /= norm;
  return FeatureVector(std::move(out));
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

struct RawInstance {
  std::vector<double> features;
  std::vector<LabelId> labels;
  std::size_t line = 0;
};

TrainingSet finish(std::vector<RawInstance> raw, std::size_t feature_count, int label_count) {
  if (raw.empty()) throw ParseError("no instances", 0);
  std::vector<Instance> instances;
  instances.reserve(raw.size());
  for (std::size_t id = 0; id < raw.size(); ++id) {
    RawInstance& r = raw[id];
    r.features.resize(feature_count, 0.0);
    try {
      instances.push_back({normalize(r.features), LabelSet(std::move(r.labels))});
    } catch (const ZeroNormError&) {
      throw ZeroNormError(
          fmt::format("zero-norm feature vector at instance {} (line {})", id, r.line));
    }
  }
  return TrainingSet(std::move(instances), feature_count, label_count);
}

void read_header_comment(std::string_view line, std::size_t& declared_m, int& declared_k,
                         std::size_t line_no) {
  for (std::string_view token : split_ws(line.substr(1))) {
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = token.substr(0, eq);
    const std::string_view value = token.substr(eq + 1);
    if (key == "K") {
      if (!parse_number(value, declared_k) || declared_k < 0) {
        throw ParseError(fmt::format("invalid label count '{}'", value), line_no);
      }
    } else if (key == "m") {
      if (!parse_number(value, declared_m)) {
        throw ParseError(fmt::format("invalid feature count '{}'", value), line_no);
      }
    }
  }
}

TrainingSet parse_svm(std::string_view text, const LoadOptions& options) {
  std::vector<RawInstance> raw;
  std::size_t declared_m = 0;
  int declared_k = 0;
  std::size_t max_index = 0;
  int max_label = 0;

  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      read_header_comment(line, declared_m, declared_k, line_no);
      continue;
    }

    RawInstance inst;
    inst.line = line_no;
    std::vector<std::string_view> tokens = split_ws(line);
    std::size_t first_feature = 0;
    if (!is_space(line.front())) {
      first_feature = 1;
      for (std::string_view label_token : split(tokens.front(), ',')) {
        LabelId k = 0;
        if (!parse_number(label_token, k)) {
          throw ParseError(fmt::format("invalid label '{}'", label_token), line_no);
        }
        if (k < 1) throw ParseError(fmt::format("label id {} < 1", k), line_no);
        inst.labels.push_back(k);
        max_label = std::max(max_label, k);
      }
    }

    std::size_t previous = 0;
    for (std::size_t t = first_feature; t < tokens.size(); ++t) {
      const std::string_view token = tokens[t];
      const std::size_t colon = token.find(':');
      std::size_t index = 0;
      double value = 0.0;
      if (colon == std::string_view::npos || !parse_number(token.substr(0, colon), index) ||
          !parse_number(token.substr(colon + 1), value)) {
        throw ParseError(fmt::format("malformed feature '{}'", token), line_no);
      }
      if (index < 1) throw ParseError("feature indices are 1-based", line_no);
      if (index <= previous) throw ParseError("feature indices must be ascending", line_no);
      if (!std::isfinite(value)) throw ParseError("non-finite feature value", line_no);
      previous = index;
      if (inst.features.size() < index) inst.features.resize(index, 0.0);
      inst.features[index - 1] = value;
    }
    max_index = std::max(max_index, previous);
    raw.push_back(std::move(inst));
  }

  std::size_t m = options.feature_count != 0 ? options.feature_count : declared_m;
  if (m == 0) m = max_index;
  if (max_index > m) {
    throw DimensionMismatch(fmt::format("feature index {} exceeds dimension {}", max_index, m));
  }
  if (declared_k != 0 && max_label > declared_k) {
    throw ParseError(fmt::format("label {} exceeds declared K={}", max_label, declared_k), 0);
  }
  const int k = std::max({declared_k, options.label_count, max_label});
  return finish(std::move(raw), m, k);
}

TrainingSet parse_csv(std::string_view text, const LoadOptions& options) {
  std::vector<std::string_view> lines = split(text, '\n');
  std::size_t line_no = 0;
  std::size_t header_line = 0;
  std::vector<std::string_view> header;
  for (; line_no < lines.size(); ++line_no) {
    if (!trim(lines[line_no]).empty()) {
      header = split(trim(lines[line_no]), ',');
      header_line = ++line_no;
      break;
    }
  }
  if (header.empty()) throw ParseError("no instances", 0);

  int label_columns = 0;
  std::size_t feature_columns = 0;
  for (std::string_view name : header) {
    name = trim(name);
    if (feature_columns == 0 && name == fmt::format("label_{}", label_columns + 1)) {
      ++label_columns;
    } else if (name == fmt::format("f_{}", feature_columns + 1)) {
      ++feature_columns;
    } else {
      throw ParseError(fmt::format("unexpected header column '{}'", name), header_line);
    }
  }
  if (options.feature_count != 0 && options.feature_count != feature_columns) {
    throw DimensionMismatch(fmt::format("csv has {} feature columns, expected {}", feature_columns,
                                        options.feature_count));
  }

  std::vector<RawInstance> raw;
  for (; line_no < lines.size(); ++line_no) {
    const std::string_view line = trim(lines[line_no]);
    if (line.empty()) continue;
    const std::vector<std::string_view> cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("expected {} columns, found {}", header.size(), cells.size()),
                       line_no + 1);
    }
    RawInstance inst;
    inst.line = line_no + 1;
    for (int k = 0; k < label_columns; ++k) {
      int flag = -1;
      if (!parse_number(cells[static_cast<std::size_t>(k)], flag) || (flag != 0 && flag != 1)) {
        throw ParseError(fmt::format("label column {} must be 0 or 1", k + 1), line_no + 1);
      }
      if (flag == 1) inst.labels.push_back(k + 1);
    }
    inst.features.resize(feature_columns);
    for (std::size_t j = 0; j < feature_columns; ++j) {
      double value = 0.0;
      const std::string_view cell = cells[static_cast<std::size_t>(label_columns) + j];
      if (!parse_number(cell, value) || !std::isfinite(value)) {
        throw ParseError(fmt::format("invalid feature value '{}'", trim(cell)), line_no + 1);
      }
      inst.features[j] = value;
    }
    raw.push_back(std::move(inst));
  }
  return finish(std::move(raw), feature_columns, std::max(label_columns, options.label_count));
}

}  // namespace

TrainingSet parse_dataset(std::string_view text, DataFormat format, const LoadOptions& options) {
  return format == DataFormat::kCsv ? parse_csv(text, options) : parse_svm(text, options);
}

TrainingSet load_dataset(const std::filesystem::path& path, DataFormat format,
                         const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), format, options);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> shuffled_ids(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> ids(count);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

FoldPlan split_folds(std::size_t instance_count, int fold_count, std::uint64_t seed) {
  if (fold_count < 2 || static_cast<std::size_t>(fold_count) > instance_count) {
    throw std::invalid_argument(
        fmt::format("fold count {} outside 2..{}", fold_count, instance_count));
  }
  FoldPlan plan;
  plan.fold_count = fold_count;
  plan.seed = seed;
  plan.assignment.resize(instance_count);
  const std::vector<std::size_t> order = shuffled_ids(instance_count, seed);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    plan.assignment[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(fold_count));
  }
  return plan;
}

std::vector<std::size_t> FoldPlan::test_ids(int fold) const {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < assignment.size(); ++id) {
    if (assignment[id] == fold) ids.push_back(id);
  }
  return ids;
}

std::vector<std::size_t> FoldPlan::train_ids(int fold) const {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < assignment.size(); ++id) {
    if (assignment[id] != fold) ids.push_back(id);
  }
  return ids;
}

}  // namespace sml
