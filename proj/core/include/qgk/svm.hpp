#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "qgk/densela.hpp"

namespace qgk {

struct SvmConfig {
  double c = 1.0;
  double tol = 1e-3;
  std::size_t max_passes = 0;       // 0 → 10·n; one pass = n working-pair updates
  bool record_objective = false;    // keep the dual objective after every update
};

/// One binary machine: f(x) = Σ_s coef_s·K(x, x_s) + bias, coef_s = α_s·y_s.
struct BinaryMachine {
  int positive_class = 1;
  std::vector<std::size_t> support;
  std::vector<double> coef;
  double bias = 0.0;
  double dual_objective = 0.0;  // Σα − ½ΣΣ α_i α_j y_i y_j K_ij
  double max_violation = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> alpha;              // full dual vector (training order)
  std::vector<double> objective_history;  // only with record_objective
};

struct SvmModel {
  double c = 1.0;
  double tol = 1e-3;
  std::size_t n_train = 0;
  std::vector<int> classes;  // sorted distinct labels
  // Two classes → one machine (positive = classes[1]); otherwise one-vs-rest.
  std::vector<BinaryMachine> machines;

  [[nodiscard]] bool converged() const;
};

/// Trains a dual SVM on a precomputed kernel by SMO with maximal-violating-pair
/// selection (deterministic scan order).
[[nodiscard]] SvmModel fit(const RealMatrix& k_train, std::span<const int> labels,
                           const SvmConfig& config = {});

// Binary SMO with y ∈ {−1, +1}.
[[nodiscard]] BinaryMachine fit_binary(const RealMatrix& k, std::span<const double> y,
                                       const SvmConfig& config);

// Decision values, n_test × machines.
[[nodiscard]] RealMatrix decision_values(const SvmModel& model, const RealMatrix& k_test_train);

// Binary: positive class iff f > 0. One-vs-rest: argmax, ties to the lowest class.
[[nodiscard]] std::vector<int> predict(const SvmModel& model, const RealMatrix& k_test_train);

[[nodiscard]] double accuracy(std::span<const int> predicted, std::span<const int> truth);

// Dual objective Σα − ½ΣΣ α_i α_j y_i y_j K_ij.
[[nodiscard]] double dual_objective(const RealMatrix& k, std::span<const double> y,
                                    std::span<const double> alpha);

// Text checkpoint: C, tol, n_train, classes, then per machine its class, bias,
// support indices and coefficients.
void save_model(const std::filesystem::path& path, const SvmModel& model);
[[nodiscard]] SvmModel load_model(const std::filesystem::path& path);

}  // namespace qgk
