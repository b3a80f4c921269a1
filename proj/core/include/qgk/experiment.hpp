#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qgk/complexity.hpp"
#include "qgk/config.hpp"
#include "qgk/data.hpp"
#include "qgk/embedding.hpp"
#include "qgk/kernel.hpp"
#include "qgk/metrics.hpp"
#include "qgk/projection.hpp"
#include "qgk/svm.hpp"
#include "qgk/vgg.hpp"

namespace qgk {

/// A failure inside one seed's pipeline, tagged with the seed and stage.
class StageError : public Error {
 public:
  StageError(std::uint64_t seed, std::string stage, const std::string& what)
      : Error("seed " + std::to_string(seed) + ", stage " + stage + ": " + what),
        seed_(seed),
        stage_(std::move(stage)) {}
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] const std::string& stage() const { return stage_; }

 private:
  std::uint64_t seed_;
  std::string stage_;
};

struct DatasetSpec {
  std::string kind = "moons";  // moons | circles | csv
  std::size_t n = 200;
  double noise = 0.2;
  double factor = 0.8;
  std::filesystem::path path;
  std::string label_column;  // index or header name; empty = last column
  bool has_header = true;
  double test_fraction = 0.1;
};

enum class KernelFamily { Qgk, Rbf, Linear };

[[nodiscard]] const char* to_string(KernelFamily f);
[[nodiscard]] KernelFamily parse_kernel_family(const std::string& name);

struct ExperimentConfig {
  DatasetSpec dataset;
  int eta = 2;
  Scaling scaling = Scaling::Exponential;
  double width = -1.0;  // < 0 → η
  std::size_t explicit_groups = 0;
  EmbeddingConfig embedding;
  InitScheme init = InitScheme::ScaledUniform;
  bool pretrain = true;  // false: the Static variant
  TrainConfig train;
  KernelFamily kernel = KernelFamily::Qgk;
  double rbf_gamma = 0.0;  // ≤ 0 → 1/(d·Var X)
  SvmConfig svm;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7};
  std::filesystem::path output_dir = "qgk-run";
  bool trace_timing = false;

  [[nodiscard]] GroupingConfig grouping() const;
  // Throws ConfigurationError on inconsistent settings.
  void validate() const;
};

/// Builds a config from flat key=value pairs; unknown keys and malformed
/// values throw ConfigurationError.
[[nodiscard]] ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);
[[nodiscard]] std::map<std::string, std::string> config_to_map(const ExperimentConfig& config);
[[nodiscard]] const std::vector<std::string>& config_keys();
void write_resolved_config(std::ostream& out, const ExperimentConfig& config);

// QGK_OUTPUT_ROOT, when set, prefixes relative output paths.
[[nodiscard]] std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

struct SeedResult {
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  double majority_rate = 0.0;
  double initial_alignment = 0.0;
  double final_alignment = 0.0;
  bool svm_converged = false;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t features = 0;
  std::size_t groups = 0;
  std::filesystem::path directory;
  std::filesystem::path trace_path;
  std::filesystem::path kernel_path;
};

struct Summary {
  double mean = 0.0;
  double half_width = 0.0;  // 95% t-interval
  std::size_t count = 0;
};

[[nodiscard]] Summary summarize(const std::vector<double>& values);

struct RunResult {
  std::vector<SeedResult> seeds;
  Summary accuracy;
  Summary final_alignment;
  Summary initial_alignment;
  std::filesystem::path directory;
};

// Splits, optionally pre-trains, fits the SVM and scores the held-out split
// for one seed. Artifacts go to `dir` when it is non-empty.
[[nodiscard]] SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed,
                                  const std::filesystem::path& dir);

[[nodiscard]] RunResult run_experiment(const ExperimentConfig& config);

// Generates or loads the configured dataset for one seed.
[[nodiscard]] Dataset load_dataset(const DatasetSpec& spec, std::uint64_t seed);

// Rebuilds the held-out accuracy of a seed directory from kernel-test.csv,
// svm-model.txt and labels-test.csv alone.
[[nodiscard]] double rescore_seed_dir(const std::filesystem::path& dir);

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);
[[nodiscard]] std::vector<int> read_labels(const std::filesystem::path& path);

struct SweepRow {
  int eta = 0;
  Scaling scaling = Scaling::Exponential;
  double width = 0.0;
  MetricsReport report;
};

// Widths are taken literally; a negative width stands for w = η.
[[nodiscard]] std::vector<SweepRow> run_metrics_sweep(const std::vector<int>& etas,
                                                      const std::vector<Scaling>& scalings,
                                                      const std::vector<double>& widths,
                                                      const MetricsOptions& options);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct GammaChoice {
  double value = 1.0;
  bool equals_eta = false;  // γ = η
};

[[nodiscard]] GammaChoice parse_gamma(const std::string& text);

struct BreakevenTables {
  std::vector<EfficiencyBound> bounds;
  std::vector<BenchmarkCost> benchmarks;
};

[[nodiscard]] BreakevenTables run_breakeven(const std::vector<int>& etas,
                                            const std::vector<GammaChoice>& gammas);

}  // namespace qgk
