// Command-line front end: cross-validated evaluation and train/test prediction.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "sml/dataset.hpp"
#include "sml/errors.hpp"
#include "sml/experiment.hpp"
#include "sml/report.hpp"

namespace {

struct ModelFlags {
  std::string sim = "rbf";
  std::string gamma = "auto";
  std::optional<double> c;
  std::optional<int> d;
  std::string decoder = "setsize";
  double sample = 1.0;
  std::vector<double> gamma_grid;
  int inner_folds = 5;
  double tune_fraction = 0.10;
  std::string criterion = "average_precision";
  std::string tune_scope = "pool";
  std::uint64_t seed = 42;
  unsigned threads = 1;

  void attach(CLI::App& app) {
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--sim", sim, "Similarity function")->check(CLI::IsMember({"rbf", "poly"}))->capture_default_str();
    app.add_option("--gamma", gamma, "RBF gamma, or 'auto' to tune it")->capture_default_str();
    app.add_option("--c", c, "Polynomial offset (default 1)");
    app.add_option("--d", d, "Polynomial degree (default 2)");
    app.add_option("--decoder", decoder, "Label-set decoder")
        ->check(CLI::IsMember({"setsize", "threshold"}))
        ->capture_default_str();
    app.add_option("--sample", sample, "Training sampling fraction in (0, 1]")->capture_default_str();
    app.add_option("--gamma-grid", gamma_grid, "Gamma candidates for tuning")->delimiter(',');
    app.add_option("--inner-folds", inner_folds, "Inner folds for tuning")->capture_default_str();
    app.add_option("--tune-fraction", tune_fraction, "Fraction of training data used for tuning")->capture_default_str();
    app.add_option("--criterion", criterion, "Tuning criterion")
        ->check(CLI::IsMember({"hamming_loss", "one_error", "coverage", "ranking_loss", "average_precision"}))
        ->capture_default_str();
    app.add_option("--tune-scope", tune_scope, "Inner-CV training data: pool (outer training portion) or subset")
        ->check(CLI::IsMember({"pool", "subset"}))
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  }

  sml::ModelConfig build() const {
    sml::ModelConfig config;
    config.similarity.kind = sml::parse_similarity_kind(sim);
    if (config.similarity.kind == sml::SimilarityKind::kPolynomial) {
      config.auto_gamma = false;
      config.similarity.c = c.value_or(1.0);
      config.similarity.degree = d.value_or(2);
    } else if (gamma == "auto") {
      config.auto_gamma = true;
    } else {
      config.auto_gamma = false;
      try {
        config.similarity.gamma = std::stod(gamma);
      } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("--gamma expects 'auto' or a number, got '{}'", gamma));
      }
    }
    config.decoder = sml::parse_decoder(decoder);
    config.sample_fraction = sample;
    if (!gamma_grid.empty()) config.tuning.gamma_grid = gamma_grid;
    config.tuning.inner_folds = inner_folds;
    config.tuning.tuning_fraction = tune_fraction;
    config.tuning.criterion = sml::parse_metric(criterion);
    config.tuning.scope = sml::parse_tuning_scope(tune_scope);
    config.validate();
    return config;
  }
};

int run_eval(const std::string& data, const std::string& format, int folds, const ModelFlags& flags,
             const std::string& out, const std::string& out_format) {
  sml::ExperimentConfig config;
  config.data_path = data;
  config.format = sml::parse_data_format(format);
  config.fold_count = folds;
  config.seed = flags.seed;
  config.model = flags.build();
  config.workers = flags.threads;
  const sml::ReportFormat report_format = sml::parse_report_format(out_format);

  const sml::ExperimentResult result = sml::run_experiment(config);
  sml::emit_report(config, result, out, report_format);
  for (sml::Metric m : sml::kAllMetrics) {
    const sml::MetricSummary& s = result.report.get(m);
    fmt::print("{:<18} {:.3f} +- {:.3f}\n", sml::to_string(m), s.mean, s.std);
  }
  return 0;
}

std::string format_labels(const sml::LabelSet& labels) {
  std::string out;
  for (sml::LabelId k : labels) {
    if (!out.empty()) out += ',';
    out += std::to_string(k);
  }
  return out;
}

int run_predict(const std::string& train_path, const std::string& test_path, const std::string& format,
                const ModelFlags& flags, const std::string& out, bool verbose) {
  const sml::DataFormat data_format = sml::parse_data_format(format);
  auto training = std::make_shared<const sml::TrainingSet>(sml::load_dataset(train_path, data_format));
  sml::LoadOptions test_options;
  test_options.feature_count = training->feature_count();
  test_options.label_count = training->label_count();
  sml::TrainingSet test = [&] {
    try {
      return sml::load_dataset(test_path, data_format, test_options);
    } catch (const sml::DimensionMismatch& e) {
      throw sml::DimensionMismatch(fmt::format("train/test dimension mismatch: {}", e.what()));
    }
  }();

  const sml::Predictor predictor = sml::Predictor::train(training, flags.build(), flags.seed, flags.threads);
  std::vector<sml::FeatureVector> queries;
  queries.reserve(test.size());
  for (const sml::Instance& inst : test.instances()) queries.push_back(inst.features);
  const std::vector<sml::Prediction> predictions = predictor.predict(queries, flags.threads);

  std::ofstream file;
  std::ostream* sink = &std::cout;
  if (out != "-") {
    file.open(out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error(fmt::format("cannot open '{}' for writing", out));
    sink = &file;
  }
  for (const sml::Prediction& p : predictions) {
    std::string line = format_labels(p.labels);
    if (verbose) {
      line += '\t';
      for (std::size_t k = 0; k < p.scores.values().size(); ++k) {
        if (k) line += ',';
        line += fmt::format("{:.10g}", p.scores.values()[k]);
      }
    }
    *sink << line << '\n';
  }
  sink->flush();
  if (!*sink) throw std::runtime_error("failed writing predictions");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity-based multi-label learning"};
  app.require_subcommand(1);

  std::string data, format = "multilabel-svm", out, out_format = "json";
  int folds = 10;
  ModelFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "Cross-validated evaluation of all five metrics");
  eval->add_option("--data", data, "Dataset path")->required();
  eval->add_option("--format", format, "Dataset format")
      ->check(CLI::IsMember({"multilabel-svm", "csv"}))
      ->capture_default_str();
  eval->add_option("--folds", folds, "Number of folds")->capture_default_str();
  eval->add_option("--out", out, "Report path")->required();
  eval->add_option("--out-format", out_format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  eval_flags.attach(*eval);

  std::string train_path, test_path, predict_format = "multilabel-svm", predict_out = "-";
  bool verbose = false;
  ModelFlags predict_flags;
  CLI::App* predict = app.add_subcommand("predict", "Train on one file and predict label sets for another");
  predict->add_option("--train", train_path, "Training data path")->required();
  predict->add_option("--test", test_path, "Test data path")->required();
  predict->add_option("--format", predict_format, "Format of both files")
      ->check(CLI::IsMember({"multilabel-svm", "csv"}))
      ->capture_default_str();
  predict->add_option("--out", predict_out, "Output path, '-' for stdout")->capture_default_str();
  predict->add_flag("--verbose-scores", verbose, "Append the K label scores to each line");
  predict_flags.attach(*predict);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (eval->parsed()) return run_eval(data, format, folds, eval_flags, out, out_format);
    return run_predict(train_path, test_path, predict_format, predict_flags, predict_out, verbose);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
