#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sml/dataset.hpp"
#include "sml/errors.hpp"
#include "sml/experiment.hpp"
#include "sml/metrics.hpp"
#include "sml/report.hpp"

namespace py = pybind11;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelLists = std::vector<std::vector<int>>;

std::vector<sml::FeatureVector> rows_of(const Matrix& x, bool normalize) {
  if (x.ndim() != 2) throw std::invalid_argument("features must be a 2-d array");
  const auto view = x.unchecked<2>();
  std::vector<sml::FeatureVector> rows;
  rows.reserve(static_cast<std::size_t>(view.shape(0)));
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    std::vector<double> v(static_cast<std::size_t>(view.shape(1)));
    for (py::ssize_t j = 0; j < view.shape(1); ++j) v[static_cast<std::size_t>(j)] = view(i, j);
    rows.push_back(normalize ? sml::normalize(v) : sml::FeatureVector(std::move(v)));
  }
  return rows;
}

std::vector<sml::LabelSet> label_sets(const LabelLists& labels) {
  std::vector<sml::LabelSet> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.emplace_back(l);
  return out;
}

std::vector<sml::ScoreVector> score_rows(const Matrix& scores) {
  if (scores.ndim() != 2) throw std::invalid_argument("scores must be a 2-d array");
  const auto view = scores.unchecked<2>();
  std::vector<sml::ScoreVector> out;
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    std::vector<double> v(static_cast<std::size_t>(view.shape(1)));
    for (py::ssize_t j = 0; j < view.shape(1); ++j) v[static_cast<std::size_t>(j)] = view(i, j);
    out.emplace_back(std::move(v));
  }
  return out;
}

LabelLists label_lists(const std::vector<sml::Prediction>& predictions) {
  LabelLists out;
  for (const auto& p : predictions) out.emplace_back(p.labels.begin(), p.labels.end());
  return out;
}

Matrix score_matrix(const std::vector<sml::Prediction>& predictions, int label_count) {
  Matrix out({static_cast<py::ssize_t>(predictions.size()), static_cast<py::ssize_t>(label_count)});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    for (int k = 0; k < label_count; ++k) view(static_cast<py::ssize_t>(i), k) = predictions[i].scores.values()[static_cast<std::size_t>(k)];
  }
  return out;
}

struct Dataset {
  std::shared_ptr<const sml::TrainingSet> data;

  Matrix features() const {
    Matrix out({static_cast<py::ssize_t>(data->size()), static_cast<py::ssize_t>(data->feature_count())});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < data->size(); ++i) {
      const auto v = (*data)[i].features.values();
      for (std::size_t j = 0; j < v.size(); ++j) view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = v[j];
    }
    return out;
  }
  LabelLists labels() const {
    LabelLists out;
    for (const auto& inst : data->instances()) out.emplace_back(inst.labels.begin(), inst.labels.end());
    return out;
  }
};

sml::ModelConfig model_config(const std::string& similarity, std::optional<double> gamma, double c, int degree,
                              const std::string& decoder, double sample_fraction,
                              std::optional<std::vector<double>> gamma_grid) {
  sml::ModelConfig config;
  config.similarity.kind = sml::parse_similarity_kind(similarity);
  config.similarity.c = c;
  config.similarity.degree = degree;
  config.auto_gamma = config.similarity.kind == sml::SimilarityKind::kRbf && !gamma;
  if (gamma) config.similarity.gamma = *gamma;
  config.decoder = sml::parse_decoder(decoder);
  config.sample_fraction = sample_fraction;
  if (gamma_grid) config.tuning.gamma_grid = *gamma_grid;
  config.validate();
  return config;
}

class Classifier {
 public:
  Classifier(std::string similarity, std::optional<double> gamma, double c, int degree, std::string decoder,
             double sample_fraction, std::optional<std::vector<double>> gamma_grid, std::uint64_t seed,
             unsigned workers)
      : config_(model_config(similarity, gamma, c, degree, decoder, sample_fraction, std::move(gamma_grid))),
        seed_(seed),
        workers_(workers) {}

  Classifier& fit(const Matrix& x, const LabelLists& y, int label_count, bool normalize) {
    std::vector<sml::FeatureVector> rows = rows_of(x, normalize);
    if (rows.size() != y.size()) throw std::invalid_argument("features and labels differ in length");
    std::vector<sml::Instance> instances;
    for (std::size_t i = 0; i < rows.size(); ++i) instances.push_back({std::move(rows[i]), sml::LabelSet(y[i])});
    if (label_count == 0) {
      for (const auto& l : y)
        for (int k : l) label_count = std::max(label_count, k);
    }
    const std::size_t dim = x.ndim() == 2 ? static_cast<std::size_t>(x.shape(1)) : 0;
    auto data = std::make_shared<const sml::TrainingSet>(std::move(instances), dim, label_count);
    return fit_dataset(Dataset{std::move(data)});
  }

  Classifier& fit_dataset(const Dataset& data) {
    predictor_ = sml::Predictor::train(data.data, config_, seed_, workers_);
    return *this;
  }

  std::vector<sml::Prediction> run(const Matrix& x, bool normalize) const {
    if (!predictor_) throw std::runtime_error("classifier is not fitted");
    const std::vector<sml::FeatureVector> rows = rows_of(x, normalize);
    py::gil_scoped_release release;
    return predictor_->predict(rows, workers_);
  }

  LabelLists predict(const Matrix& x, bool normalize) const { return label_lists(run(x, normalize)); }
  Matrix decision_function(const Matrix& x, bool normalize) const {
    return score_matrix(run(x, normalize), predictor_->model().label_count());
  }
  double gamma() const {
    if (!predictor_) throw std::runtime_error("classifier is not fitted");
    return predictor_->model().similarity().gamma;
  }

 private:
  sml::ModelConfig config_;
  std::uint64_t seed_;
  unsigned workers_;
  std::optional<sml::Predictor> predictor_;
};

py::dict summary_dict(const sml::ExperimentResult& result) {
  py::dict out;
  for (sml::Metric m : sml::kAllMetrics) {
    const auto& s = result.report.get(m);
    out[py::str(std::string(sml::to_string(m)))] = py::make_tuple(s.mean, s.std);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Similarity-based multi-label learning";

  py::register_exception<sml::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<sml::ZeroNormError>(m, "ZeroNormError", PyExc_ValueError);
  py::register_exception<sml::DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("labels", &Dataset::labels)
      .def_property_readonly("label_count", [](const Dataset& d) { return d.data->label_count(); })
      .def_property_readonly("feature_count", [](const Dataset& d) { return d.data->feature_count(); })
      .def("__len__", [](const Dataset& d) { return d.data->size(); });

  m.def(
      "load_dataset",
      [](const std::string& path, const std::string& format) {
        return Dataset{std::make_shared<const sml::TrainingSet>(sml::load_dataset(path, sml::parse_data_format(format)))};
      },
      py::arg("path"), py::arg("format") = "multilabel-svm");
  m.def(
      "parse_dataset",
      [](const std::string& text, const std::string& format) {
        return Dataset{std::make_shared<const sml::TrainingSet>(sml::parse_dataset(text, sml::parse_data_format(format)))};
      },
      py::arg("text"), py::arg("format") = "multilabel-svm");

  py::class_<Classifier>(m, "Classifier")
      .def(py::init<std::string, std::optional<double>, double, int, std::string, double,
                    std::optional<std::vector<double>>, std::uint64_t, unsigned>(),
           py::kw_only(), py::arg("similarity") = "rbf", py::arg("gamma") = py::none(), py::arg("c") = 1.0,
           py::arg("degree") = 2, py::arg("decoder") = "setsize", py::arg("sample_fraction") = 1.0,
           py::arg("gamma_grid") = py::none(), py::arg("seed") = 42, py::arg("workers") = 1)
      .def("fit", &Classifier::fit, py::arg("X"), py::arg("Y"), py::arg("label_count") = 0,
           py::arg("normalize") = true, py::return_value_policy::reference_internal)
      .def("fit_dataset", &Classifier::fit_dataset, py::arg("data"), py::return_value_policy::reference_internal)
      .def("predict", &Classifier::predict, py::arg("X"), py::arg("normalize") = true)
      .def("decision_function", &Classifier::decision_function, py::arg("X"), py::arg("normalize") = true)
      .def_property_readonly("gamma_", &Classifier::gamma);

  m.def(
      "hamming_loss",
      [](const LabelLists& pred, const LabelLists& truth, int label_count) {
        return sml::hamming_loss(label_sets(pred), label_sets(truth), label_count);
      },
      py::arg("predicted"), py::arg("truth"), py::arg("label_count"));
  m.def("one_error", [](const Matrix& s, const LabelLists& y) { return sml::one_error(score_rows(s), label_sets(y)).value; },
        py::arg("scores"), py::arg("truth"));
  m.def("coverage", [](const Matrix& s, const LabelLists& y) { return sml::coverage(score_rows(s), label_sets(y)).value; },
        py::arg("scores"), py::arg("truth"));
  m.def("ranking_loss",
        [](const Matrix& s, const LabelLists& y) { return sml::ranking_loss(score_rows(s), label_sets(y)).value; },
        py::arg("scores"), py::arg("truth"));
  m.def("average_precision",
        [](const Matrix& s, const LabelLists& y) { return sml::average_precision(score_rows(s), label_sets(y)).value; },
        py::arg("scores"), py::arg("truth"));

  m.def(
      "cross_validate",
      [](const std::string& path, const std::string& format, int folds, std::uint64_t seed, const std::string& similarity,
         std::optional<double> gamma, double c, int degree, const std::string& decoder, double sample_fraction,
         std::optional<std::vector<double>> gamma_grid, unsigned workers) {
        sml::ExperimentConfig config;
        config.data_path = path;
        config.format = sml::parse_data_format(format);
        config.fold_count = folds;
        config.seed = seed;
        config.workers = workers;
        config.model = model_config(similarity, gamma, c, degree, decoder, sample_fraction, std::move(gamma_grid));
        sml::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = sml::run_experiment(config);
        }
        py::dict out = summary_dict(result);
        out["fold_gammas"] = result.fold_gammas;
        out["report_json"] = sml::report_to_json(config, result);
        return out;
      },
      py::arg("path"), py::kw_only(), py::arg("format") = "multilabel-svm", py::arg("folds") = 10,
      py::arg("seed") = 42, py::arg("similarity") = "rbf", py::arg("gamma") = py::none(), py::arg("c") = 1.0,
      py::arg("degree") = 2, py::arg("decoder") = "setsize", py::arg("sample_fraction") = 1.0,
      py::arg("gamma_grid") = py::none(), py::arg("workers") = 1);
}
