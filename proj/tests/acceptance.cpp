// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "sml/decoding.hpp"
#include "sml/experiment.hpp"
#include "sml/metrics.hpp"
#include "sml/report.hpp"
#include "sml/scoring.hpp"
#include "test_util.hpp"

namespace {

using namespace sml;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

ExperimentConfig ten_fold_protocol(const std::string& file) {
  ExperimentConfig config;
  config.data_path = std::string(SML_DATA_DIR) + "/" + file;
  config.fold_count = 10;
  config.seed = 42;
  config.workers = 1;
  return config;
}

Outcome yeast_reproduction() {
  const auto start = Clock::now();
  const ExperimentResult r = run_experiment(ten_fold_protocol("yeast.svm"));
  const EvaluationReport& e = r.report;
  struct Target {
    Metric metric;
    double expected, tol;
  };
  const Target targets[] = {{Metric::kHammingLoss, 0.193, 0.02},
                            {Metric::kOneError, 0.220, 0.03},
                            {Metric::kCoverage, 6.082, 0.35},
                            {Metric::kRankingLoss, 0.155, 0.02},
                            {Metric::kAveragePrecision, 0.783, 0.025}};
  Outcome out{true, ""};
  for (const Target& t : targets) {
    const double got = e.get(t.metric).mean;
    const bool ok = within(got, t.expected, t.tol);
    out.pass = out.pass && ok;
    out.detail += fmt::format("{}={:.4f} (target {} +-{}{}) ", to_string(t.metric), got, t.expected, t.tol,
                              ok ? "" : " MISS");
  }
  out.detail += fmt::format("time={:.1f}s", seconds_since(start));
  return out;
}

Outcome scene_property() {
  const TrainingSet data = load_dataset(std::string(SML_DATA_DIR) + "/scene.svm", DataFormat::kMultilabelSvm);
  const ExperimentResult r = run_experiment(data, ten_fold_protocol("scene.svm"));
  const EvaluationReport& e = r.report;

  // Uniform random scores over the same instances, averaged over a few draws.
  std::vector<LabelSet> truth;
  for (const Instance& inst : data.instances()) truth.push_back(inst.labels);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double baseline = 0.0;
  constexpr int kDraws = 5;
  for (int d = 0; d < kDraws; ++d) {
    std::vector<ScoreVector> scores;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      std::vector<double> s(static_cast<std::size_t>(data.label_count()));
      for (double& x : s) x = u(rng);
      scores.emplace_back(std::move(s));
    }
    baseline += average_precision(scores, truth).value / kDraws;
  }

  const int k = data.label_count();
  bool legal = true;
  for (const FoldMetrics& f : e.folds) {
    for (Metric m : {Metric::kHammingLoss, Metric::kOneError, Metric::kRankingLoss, Metric::kAveragePrecision}) {
      legal = legal && f.get(m) >= 0.0 && f.get(m) <= 1.0;
    }
    legal = legal && f.coverage >= 0.0 && f.coverage <= k - 1;
  }
  const double ap = e.average_precision.mean;
  return {ap - baseline >= 0.15 && legal,
          fmt::format("AP={:.4f} random={:.4f} margin={:.4f} (need >=0.15) legal_ranges={} hl={:.4f} oe={:.4f} "
                      "cov={:.4f} rl={:.4f}",
                      ap, baseline, ap - baseline, legal, e.hamming_loss.mean, e.one_error.mean, e.coverage.mean,
                      e.ranking_loss.mean)};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> n_dist(1, 20), k_dist(1, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = k_dist(rng), n = n_dist(rng);
    const bool ties = trial % 3 == 0;
    std::vector<ScoreVector> scores;
    std::vector<LabelSet> truth, predicted;
    for (int i = 0; i < n; ++i) {
      scores.push_back(testing::random_scores(rng, k, ties));
      truth.push_back(testing::random_labels(rng, k, 0.5));
      predicted.push_back(testing::random_labels(rng, k, 0.5));
    }
    const double diffs[] = {
        hamming_loss(predicted, truth, k) - oracle::hamming(predicted, truth, k),
        one_error(scores, truth).value - oracle::one_error(scores, truth),
        coverage(scores, truth).value - oracle::coverage(scores, truth),
        ranking_loss(scores, truth).value - oracle::ranking_loss(scores, truth),
        average_precision(scores, truth).value - oracle::average_precision(scores, truth),
    };
    for (double d : diffs) worst = std::max(worst, std::abs(d));
  }
  return {worst <= 1e-12, fmt::format("1000 cases, max |diff|={:.3g} (tol 1e-12)", worst)};
}

Outcome score_consistency() {
  std::mt19937_64 rng(4);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 7);
    const int k = 1 + trial % 6;
    const TrainingSet data = testing::random_training(rng, 5 + static_cast<std::size_t>(trial), dim, k);
    const SimilarityConfig sim = trial % 2 ? SimilarityConfig::rbf(0.1 + trial * 0.05)
                                           : SimilarityConfig::polynomial(0.5 + trial % 3, 1 + trial % 4);
    const SmlModel model = fit(data, sim);
    const FeatureVector x = testing::random_unit(rng, dim);
    const ScoreVector all = score_all(model, x);
    for (LabelId label = 1; label <= k; ++label) {
      if (all.label(label) != score_label(model, x, label)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt::format("100 models, {} exact mismatches", mismatches)};
}

Outcome multiclass_case() {
  std::mt19937_64 rng(5);
  int disagreements = 0, checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int classes = 2 + trial % 5;
    const std::size_t dim = 2 + static_cast<std::size_t>(trial % 4);
    std::uniform_int_distribution<int> pick(1, classes);
    std::vector<FeatureVector> points;
    std::vector<int> labels;
    std::vector<Instance> instances;
    for (int i = 0; i < 60; ++i) {
      const int c = pick(rng);
      points.push_back(testing::random_unit(rng, dim));
      labels.push_back(c);
      instances.push_back({points.back(), LabelSet{c}});
    }
    auto data = std::make_shared<const TrainingSet>(std::move(instances), dim, classes);
    ModelConfig config;
    config.auto_gamma = false;
    config.similarity = trial % 2 ? SimilarityConfig::rbf(0.5 + trial) : SimilarityConfig::polynomial(1.0, 3);
    const Predictor predictor = Predictor::train(data, config, 1);

    std::vector<FeatureVector> queries;
    for (int q = 0; q < 50; ++q) queries.push_back(testing::random_unit(rng, dim));
    const std::vector<Prediction> predictions = predictor.predict(queries);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const int expected = oracle::multiclass_argmax(points, labels, classes, config.similarity, queries[q]);
      ++checked;
      if (!(predictions[q].labels == LabelSet{expected})) ++disagreements;
    }
  }
  return {disagreements == 0, fmt::format("{} test points, {} disagreements", checked, disagreements)};
}

Outcome threshold_machinery() {
  std::mt19937_64 rng(6);
  int beaten = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 8;
    const ScoreVector s = testing::random_scores(rng, k, trial % 3 == 0);
    const LabelSet y = testing::random_labels(rng, k);
    const int got = threshold_errors(s, y, compute_s_target(s, y));
    std::vector<double> probes{-std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    for (double a : s.values()) {
      probes.insert(probes.end(), {a, a - 1.0, a + 1.0, std::nextafter(a, -1e300), std::nextafter(a, 1e300)});
      for (double b : s.values()) probes.push_back(0.5 * (a + b));
    }
    for (double tau : probes) {
      if (threshold_errors(s, y, tau) < got) {
        ++beaten;
        break;
      }
    }
  }

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 6;
    const int n = k + 2 + trial;
    std::vector<ScoreVector> rows;
    std::vector<double> targets;
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      rows.push_back(testing::random_scores(rng, k, false));
      targets.push_back(noise(rng));
    }
    const ThresholdModel model = fit_threshold(rows, targets, kThresholdRidge);
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = model.threshold(rows[static_cast<std::size_t>(i)]) - targets[static_cast<std::size_t>(i)];
      rss += r * r;
    }
    worst = std::max(worst, std::abs(rss - oracle::dense_lsq_rss(rows, targets)));
  }
  return {beaten == 0 && worst <= 1e-6,
          fmt::format("s-target beaten in {}/1000 cases; max residual diff={:.3g} (tol 1e-6)", beaten, worst)};
}

Outcome linear_scaling() {
  std::mt19937_64 rng(7);
  constexpr std::size_t kDim = 64, kQueries = 1000;
  constexpr int kLabels = 10;
  const TrainingSet big = testing::random_training(rng, 8000, kDim, kLabels, 0.2);
  std::vector<std::size_t> half_ids(4000);
  for (std::size_t i = 0; i < half_ids.size(); ++i) half_ids[i] = i;
  const TrainingSet small = big.subset(half_ids);
  std::vector<FeatureVector> queries;
  for (std::size_t q = 0; q < kQueries; ++q) queries.push_back(testing::random_unit(rng, kDim));

  const SimilarityConfig sim = SimilarityConfig::rbf(1.0);
  const SmlModel m_small = fit(small, sim), m_big = fit(big, sim);
  auto median_time = [&](const SmlModel& model) {
    std::vector<double> times;
    volatile double sink = 0.0;
    for (int run = 0; run < 5; ++run) {
      const auto start = Clock::now();
      const auto scores = score_batch(model, queries, 1);
      times.push_back(seconds_since(start));
      sink = sink + scores.front().values()[0];
    }
    std::sort(times.begin(), times.end());
    return times[2];
  };
  median_time(m_small);  // warm-up
  const double t_small = median_time(m_small), t_big = median_time(m_big);
  const double ratio = t_big / t_small;
  return {ratio >= 1.5 && ratio <= 2.5,
          fmt::format("n=4000: {:.4f}s, n=8000: {:.4f}s, ratio={:.3f} (need [1.5, 2.5])", t_small, t_big, ratio)};
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SML_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const std::string data = std::string(SML_DATA_DIR) + "/yeast.svm";
  const auto a = testing::TempFile::output(".json");
  const auto b = testing::TempFile::output(".json");
  const auto c = testing::TempFile::output(".json");
  const auto d = testing::TempFile::output(".csv");
  const auto e = testing::TempFile::output(".csv");
  const std::string base = "eval --data '" + data + "' --seed 7 --out ";
  bool ok = run_cli(base + "'" + a.path().string() + "'") == 0 &&
            run_cli(base + "'" + b.path().string() + "' --threads 2") == 0 &&
            run_cli(base + "'" + c.path().string() + "' --sample 1.0") == 0 &&
            run_cli(base + "'" + d.path().string() + "' --out-format csv --gamma 4") == 0 &&
            run_cli(base + "'" + e.path().string() + "' --out-format csv --gamma 4 --sample 1.0") == 0;
  const bool repeat = ok && !a.read().empty() && a.read() == b.read();
  const bool full_sample = ok && a.read() == c.read() && !d.read().empty() && d.read() == e.read();

  // Model level: an explicit 1.0 sample yields the same scores as no sampling.
  std::mt19937_64 rng(8);
  const TrainingSet train = testing::random_training(rng, 300, 8, 5);
  const SmlModel plain = fit(train, SimilarityConfig::rbf(2.0));
  const SmlModel sampled = fit(train, SimilarityConfig::rbf(2.0), Sampling{1.0, 99});
  bool same_scores = true;
  for (int q = 0; q < 50; ++q) {
    const FeatureVector x = testing::random_unit(rng, 8);
    same_scores = same_scores && score_all(plain, x) == score_all(sampled, x);
  }
  return {repeat && full_sample && same_scores,
          fmt::format("cli_ok={} repeat_identical={} sample1_identical={} model_scores_identical={}", ok, repeat,
                      full_sample, same_scores)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "yeast 10-fold reproduction", yeast_reproduction},
      {2, "scene substitute beats random baseline", scene_property},
      {3, "metric oracle equivalence", metric_oracles},
      {4, "score_all equals score_label", score_consistency},
      {5, "multi-class special case", multiclass_case},
      {6, "threshold target and regression", threshold_machinery},
      {7, "linear scaling in n", linear_scaling},
      {8, "eval determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    fmt::print("criterion {}: {} - {} - {}\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
