#include "sml/report.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include "json.hpp"

namespace sml {

namespace {

std::string real(double v) { return fmt::format("{:.6f}", v); }

std::string real_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += real(values[i]);
  }
  return out + "]";
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw std::invalid_argument(fmt::format("unknown report format '{}'", name));
}

std::string report_to_json(const ExperimentConfig& config, const ExperimentResult& result) {
  const ModelConfig& model = config.model;
  const TuningPlan& tuning = model.tuning;
  std::string out = "{\n  \"config\": {\n";
  out += fmt::format("    \"data\": {},\n", json_string(config.data_path.generic_string()));
  out += fmt::format("    \"format\": {},\n", json_string(to_string(config.format)));
  out += fmt::format("    \"folds\": {},\n", config.fold_count);
  out += fmt::format("    \"seed\": {},\n", config.seed);
  out += fmt::format("    \"similarity\": {},\n", json_string(to_string(model.similarity.kind)));
  out += fmt::format("    \"gamma\": {},\n", model.auto_gamma ? json_string("auto") : real(model.similarity.gamma));
  out += fmt::format("    \"c\": {},\n", real(model.similarity.c));
  out += fmt::format("    \"d\": {},\n", model.similarity.degree);
  out += fmt::format("    \"decoder\": {},\n", json_string(to_string(model.decoder)));
  out += fmt::format("    \"sample_fraction\": {},\n", real(model.sample_fraction));
  out += "    \"tuning\": {\n";
  out += fmt::format("      \"gamma_grid\": {},\n", real_array(tuning.gamma_grid));
  out += fmt::format("      \"inner_folds\": {},\n", tuning.inner_folds);
  out += fmt::format("      \"fraction\": {},\n", real(tuning.tuning_fraction));
  out += fmt::format("      \"criterion\": {},\n", json_string(to_string(tuning.criterion)));
  out += fmt::format("      \"scope\": {}\n", json_string(to_string(tuning.scope)));
  out += "    }\n  },\n";
  for (Metric m : kAllMetrics) {
    const MetricSummary& s = result.report.get(m);
    out += fmt::format("  {}: {{\"mean\": {}, \"std\": {}}},\n", json_string(to_string(m)), real(s.mean), real(s.std));
  }
  out += "  \"folds\": {\n";
  out += fmt::format("    \"gamma\": {}", real_array(result.fold_gammas));
  for (Metric m : kAllMetrics) {
    std::vector<double> column;
    for (const FoldMetrics& f : result.report.folds) column.push_back(f.get(m));
    out += fmt::format(",\n    {}: {}", json_string(to_string(m)), real_array(column));
  }
  out += "\n  }\n}\n";
  return out;
}

std::string report_to_csv(const ExperimentResult& result) {
  std::string out = "fold";
  for (Metric m : kAllMetrics) out += fmt::format(",{}", to_string(m));
  out += "\n";
  for (std::size_t f = 0; f < result.report.folds.size(); ++f) {
    out += fmt::format("{}", f + 1);
    for (Metric m : kAllMetrics) out += "," + real(result.report.folds[f].get(m));
    out += "\n";
  }
  out += "mean";
  for (Metric m : kAllMetrics) out += "," + real(result.report.get(m).mean);
  out += "\nstd";
  for (Metric m : kAllMetrics) out += "," + real(result.report.get(m).std);
  out += "\n";
  return out;
}

void emit_report(const ExperimentConfig& config, const ExperimentResult& result,
                 const std::filesystem::path& path, ReportFormat format) {
  const std::string text =
      format == ReportFormat::kJson ? report_to_json(config, result) : report_to_csv(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

ParsedReport parse_report_json(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  ParsedReport parsed;
  ExperimentConfig& config = parsed.config;
  const nlohmann::json& c = doc.at("config");
  config.data_path = c.at("data").get<std::string>();
  config.format = parse_data_format(c.at("format").get<std::string>());
  config.fold_count = c.at("folds").get<int>();
  config.seed = c.at("seed").get<std::uint64_t>();
  ModelConfig& model = config.model;
  model.similarity.kind = parse_similarity_kind(c.at("similarity").get<std::string>());
  model.auto_gamma = c.at("gamma").is_string();
  if (!model.auto_gamma) model.similarity.gamma = c.at("gamma").get<double>();
  model.similarity.c = c.at("c").get<double>();
  model.similarity.degree = c.at("d").get<int>();
  model.decoder = parse_decoder(c.at("decoder").get<std::string>());
  model.sample_fraction = c.at("sample_fraction").get<double>();
  const nlohmann::json& t = c.at("tuning");
  model.tuning.gamma_grid = t.at("gamma_grid").get<std::vector<double>>();
  model.tuning.inner_folds = t.at("inner_folds").get<int>();
  model.tuning.tuning_fraction = t.at("fraction").get<double>();
  model.tuning.criterion = parse_metric(t.at("criterion").get<std::string>());
  model.tuning.scope = parse_tuning_scope(t.at("scope").get<std::string>());

  ExperimentResult& result = parsed.result;
  const nlohmann::json& folds = doc.at("folds");
  result.fold_gammas = folds.at("gamma").get<std::vector<double>>();
  result.report.folds.resize(result.fold_gammas.size());
  for (Metric m : kAllMetrics) {
    const std::string name(to_string(m));
    const auto column = folds.at(name).get<std::vector<double>>();
    if (column.size() != result.report.folds.size()) {
      throw std::runtime_error(fmt::format("fold array '{}' has {} entries, expected {}", name,
                                           column.size(), result.report.folds.size()));
    }
    for (std::size_t f = 0; f < column.size(); ++f) result.report.folds[f].get(m) = column[f];
    result.report.get(m) = {doc.at(name).at("mean").get<double>(), doc.at(name).at("std").get<double>()};
  }
  return parsed;
}

}  // namespace sml
