// Runs the sml binary end to end.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "test_util.hpp"

namespace {

using sml::testing::TempFile;

int run(const std::string& args, const TempFile* stdout_file = nullptr) {
  std::string command = std::string(SML_CLI_PATH) + " " + args;
  command += stdout_file ? " > '" + stdout_file->path().string() + "'" : " > /dev/null";
  command += " 2> /dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const TempFile& f) { return "'" + f.path().string() + "'"; }

std::string random_svm(unsigned seed, int n) {
  std::mt19937_64 rng(seed);
  const sml::TrainingSet data = sml::testing::random_training(rng, static_cast<std::size_t>(n), 4, 3, 0.5);
  std::string text = "#K=3 m=4\n";
  for (const sml::Instance& inst : data.instances()) {
    std::string labels;
    for (sml::LabelId k : inst.labels) labels += (labels.empty() ? "" : ",") + std::to_string(k);
    text += labels;
    for (std::size_t j = 0; j < inst.features.size(); ++j) {
      text += " " + std::to_string(j + 1) + ":" + std::to_string(inst.features[j]);
    }
    text += '\n';
  }
  return text;
}

TEST(Cli, EvalIsDeterministic) {
  TempFile data(random_svm(71, 120), ".svm");
  const auto first = TempFile::output(".json");
  const auto second = TempFile::output(".json");
  const auto csv = TempFile::output(".csv");
  const std::string base = "eval --data " + quoted(data) + " --folds 4 --tune-fraction 0.5 --out ";
  ASSERT_EQ(run(base + quoted(first)), 0);
  ASSERT_EQ(run(base + quoted(second) + " --threads 2"), 0);
  EXPECT_FALSE(first.read().empty());
  EXPECT_EQ(first.read(), second.read());

  ASSERT_EQ(run(base + quoted(csv) + " --out-format csv"), 0);
  EXPECT_EQ(csv.read().rfind("fold,hamming_loss", 0), 0u);
}

TEST(Cli, PredictPicksDominantLabels) {
  TempFile train(
      "#K=5 m=2\n"
      "2,5 1:1 2:0\n"
      "2,5 1:0.99 2:0.141\n"
      "2,5 1:0.99 2:-0.141\n"
      "1 1:0 2:1\n"
      "3 1:-1 2:0\n",
      ".svm");
  TempFile test("1 1:1 2:0.05\n", ".svm");
  const auto out = TempFile::output(".txt");
  ASSERT_EQ(run("predict --gamma 10 --train " + quoted(train) + " --test " + quoted(test) + " --out " + quoted(out)), 0);
  EXPECT_EQ(out.read(), "2,5\n");

  const auto verbose = TempFile::output(".txt");
  ASSERT_EQ(run("predict --gamma 10 --verbose-scores --train " + quoted(train) + " --test " + quoted(test), &verbose), 0);
  const std::string line = verbose.read();
  EXPECT_EQ(line.rfind("2,5\t", 0), 0u);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1 + 4);
}

TEST(Cli, EmptyPredictionIsEmptyLine) {
  TempFile train(
      "#K=2 m=2\n"
      " 1:1 2:0\n"
      " 1:0.99 2:0.141\n"
      "1 1:0 2:1\n",
      ".svm");
  TempFile test("2 1:1 2:0\n1 1:0 2:1\n", ".svm");
  const auto out = TempFile::output(".txt");
  ASSERT_EQ(run("predict --gamma 10 --train " + quoted(train) + " --test " + quoted(test), &out), 0);
  EXPECT_EQ(out.read(), "\n1\n");
}

TEST(Cli, DimensionMismatchFails) {
  TempFile train("#K=2 m=2\n1 1:1 2:0\n2 1:0 2:1\n", ".svm");
  TempFile test("1 1:0.6 2:0 3:0.8\n", ".svm");
  EXPECT_NE(run("predict --gamma 1 --train " + quoted(train) + " --test " + quoted(test)), 0);
}

TEST(Cli, BadArgumentsFail) {
  TempFile data(random_svm(72, 20), ".svm");
  const auto out = TempFile::output(".json");
  EXPECT_NE(run("eval --data " + quoted(data) + " --out " + quoted(out) + " --sample 0"), 0);
  EXPECT_NE(run("eval --data " + quoted(data) + " --out " + quoted(out) + " --gamma fast"), 0);
  EXPECT_NE(run("eval --data " + quoted(data) + " --out " + quoted(out) + " --folds 50 --gamma 1"), 0);
  EXPECT_NE(run("eval --data /nonexistent/file.svm --out " + quoted(out)), 0);
  EXPECT_NE(run("frobnicate"), 0);
}

}  // namespace
