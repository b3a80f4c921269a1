#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgk/config.hpp"
#include "qgk/experiment.hpp"

using namespace qgk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c = config_from_map({{"dataset", "moons"},
                                        {"n", "40"},
                                        {"epochs", "5"},
                                        {"seeds", "0,1"},
                                        {"output", out.string()}});
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesAndRoundTrips) {
  const auto c = config_from_map({{"eta", "3"},
                                  {"scaling", "quadratic"},
                                  {"width", "1.5"},
                                  {"mode", "sumexp"},
                                  {"gradient", "fd"},
                                  {"seeds", "2..4"},
                                  {"learning_rate", "0.05"}});
  EXPECT_EQ(c.eta, 3);
  EXPECT_EQ(c.scaling, Scaling::Quadratic);
  EXPECT_DOUBLE_EQ(c.width, 1.5);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{2, 3, 4}));
  EXPECT_EQ(c.embedding.mode, EmbeddingMode::SumExp);
  const auto again = config_from_map(config_to_map(c));
  EXPECT_EQ(config_to_map(again), config_to_map(c));
  for (const auto& [k, v] : config_to_map(c))
    EXPECT_NE(std::find(config_keys().begin(), config_keys().end(), k), config_keys().end()) << k;
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW((void)config_from_map({{"colour", "red"}}), ConfigurationError);
  EXPECT_THROW((void)config_from_map({{"eta", "two"}}), ConfigurationError);
  EXPECT_THROW((void)config_from_map({{"eta", "2x"}}), ConfigurationError);
  EXPECT_THROW((void)config_from_map({{"pretrain", "maybe"}}), ConfigurationError);
  EXPECT_THROW((void)config_from_map({{"seeds", "5..2"}}), ConfigurationError);
  // Analytic gradients need the product embedding.
  EXPECT_THROW((void)config_from_map({{"mode", "sumexp"}}).validate(), ConfigurationError);
}

TEST(Config, DefaultWidthIsEta) {
  const auto c = config_from_map({{"eta", "4"}});
  EXPECT_DOUBLE_EQ(c.grouping().width, 4.0);
}

TEST(Summary, StudentInterval) {
  const auto s = summarize({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.half_width, 4.302652729911275 * 1.0 / std::sqrt(3.0), 1e-9);
  EXPECT_EQ(summarize({0.5}).half_width, 0.0);
}

TEST(Experiment, RunsAndIsByteDeterministic) {
  const auto a_dir = fresh_dir("qgk-exp-a");
  const auto b_dir = fresh_dir("qgk-exp-b");
  const auto a = run_experiment(small_config(a_dir));
  (void)run_experiment(small_config(b_dir));
  ASSERT_EQ(a.seeds.size(), 2u);
  EXPECT_EQ(a.accuracy.count, 2u);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a_dir);
    // Only the top-level files record the output path itself.
    if (!rel.has_parent_path()) continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b_dir / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 10u);
  for (const auto& s : a.seeds) {
    EXPECT_TRUE(fs::exists(s.trace_path));
    EXPECT_NEAR(rescore_seed_dir(s.directory), s.test_accuracy, 1e-15);
    EXPECT_EQ(s.n_train + s.n_test, 40u);
  }
  fs::remove_all(a_dir);
  fs::remove_all(b_dir);
}

TEST(Experiment, BaselinesSkipTraining) {
  const auto dir = fresh_dir("qgk-exp-rbf");
  auto c = small_config(dir);
  c.kernel = KernelFamily::Rbf;
  c.seeds = {3};
  const auto r = run_experiment(c);
  EXPECT_GT(r.seeds[0].test_accuracy, 0.5);
  fs::remove_all(dir);
}

TEST(Experiment, FailuresNameSeedAndStage) {
  auto c = config_from_map({{"dataset", "csv"}, {"csv", "/nonexistent/data.csv"}, {"seeds", "6"}});
  try {
    (void)run_seed(c, 6, {});
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.seed(), 6u);
    EXPECT_EQ(e.stage(), "dataset");
    EXPECT_NE(std::string(e.what()).find("seed 6, stage dataset"), std::string::npos);
  }
}

TEST(Labels, RoundTrip) {
  const auto path = fs::temp_directory_path() / "qgk-labels.csv";
  write_labels(path, {3, 0, 1});
  EXPECT_EQ(read_labels(path), (std::vector<int>{3, 0, 1}));
  fs::remove(path);
}

TEST(Sweep, GridRows) {
  MetricsOptions opt;
  opt.entanglement_samples = 4;
  opt.expressibility_samples = 4;
  const auto rows = run_metrics_sweep({1, 2, 3, 4}, {Scaling::Exponential}, {0.0, 1.0, -1.0}, opt);
  EXPECT_EQ(rows.size(), 12u);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);
  EXPECT_DOUBLE_EQ(rows[2].width, 1.0);  // η=1, w=η
  EXPECT_DOUBLE_EQ(rows[11].width, 4.0);
  std::ostringstream again;
  write_sweep_csv(again, run_metrics_sweep({1, 2, 3, 4}, {Scaling::Exponential}, {0.0, 1.0, -1.0}, opt));
  EXPECT_EQ(again.str(), text);
}

TEST(Breakeven, GammaChoices) {
  EXPECT_TRUE(parse_gamma("eta").equals_eta);
  EXPECT_DOUBLE_EQ(parse_gamma("2.5").value, 2.5);
  EXPECT_THROW((void)parse_gamma("-1"), ConfigurationError);
  const auto t = run_breakeven({2, 3}, {parse_gamma("1"), parse_gamma("eta")});
  ASSERT_EQ(t.bounds.size(), 4u);
  EXPECT_EQ(t.benchmarks.size(), 5u);
}
