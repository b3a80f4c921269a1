#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgk/densela.hpp"
#include "qgk/generators.hpp"

namespace qgk {

enum class Scaling { Linear, Quadratic, Exponential, All, Explicit };

[[nodiscard]] const char* to_string(Scaling s);
[[nodiscard]] Scaling parse_scaling(const std::string& name);

struct GroupingConfig {
  int eta = 2;
  Scaling scaling = Scaling::Exponential;
  double width = 2.0;                  // projection width w ∈ [0, η]
  std::size_t explicit_groups = 0;     // only read for Scaling::Explicit

  // Default width w = η.
  [[nodiscard]] static GroupingConfig exponential(int eta) {
    return {eta, Scaling::Exponential, static_cast<double>(eta), 0};
  }
};

// Generators per group for the exponential scaling:
// Γ = 1 for η ≤ 2, 2Γ_{η−1} + 1 for odd η, 2Γ_{η−1} − 1 for even η.
[[nodiscard]] std::size_t generators_per_group(int eta);

// Number of groups g for a scaling. Exponential uses 3·2^η − 6·(η mod 2) + 3.
[[nodiscard]] std::size_t group_count(int eta, Scaling scaling, std::size_t explicit_groups = 0);
[[nodiscard]] std::size_t group_count(const GroupingConfig& config);

/// The grouped operators Ĥ_i = Σ_{j∈𝒢_i} h_j and their eigendecompositions.
struct VggSet {
  GroupingConfig config;
  std::size_t generator_count = 0;
  std::vector<std::size_t> permutation;               // stride permutation over positions
  std::vector<std::vector<std::size_t>> assignment;   // generator indices per group
  std::vector<ComplexMatrix> operators;
  std::vector<EigenDecomposition> eigs;

  [[nodiscard]] std::size_t groups() const { return operators.size(); }
  [[nodiscard]] int eta() const { return config.eta; }
  [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << config.eta; }
  [[nodiscard]] bool is_strict_partition() const;
};

// Round-robin S, A, D interleaving of generator indices, skipping exhausted families.
[[nodiscard]] std::vector<std::size_t> interleaved_order(const GeneratorSet& gs);

/// Width-controlled stride permutation on {0 … total−1}.
///
/// w = 0 gives the identity. Otherwise ⌊k·(w/η)·g⌋ is used when it is a
/// bijection, else (k·2^⌊log₂((w/η)·g)⌋) mod total with the exponent clamped at 0.
[[nodiscard]] std::vector<std::size_t> stride_permutation(std::size_t total, std::size_t groups,
                                                          double width, int eta);

[[nodiscard]] bool is_permutation(const std::vector<std::size_t>& perm);

// Group sizes: total/g each, with the first (total mod g) groups one larger.
[[nodiscard]] std::vector<std::size_t> group_sizes(std::size_t total, std::size_t groups);

/// Builds the VGG operators. Explicit/Exponential/All scalings require g to
/// divide |𝔥| (ConfigurationError otherwise); Linear and Quadratic spread the
/// remainder over the first groups.
[[nodiscard]] VggSet build_vgg_set(const GeneratorSet& gs, const GroupingConfig& config);

// Assignment matrix M (|𝔥| × g) with M[j, i] = 1 iff generator j is in group i.
[[nodiscard]] RealMatrix assignment_matrix(const VggSet& vgg);
[[nodiscard]] std::size_t matrix_rank(const RealMatrix& m);
[[nodiscard]] std::size_t grouping_rank(const VggSet& vgg);

struct StructuralSums {
  double total_mass = 0.0;      // Σ|𝒢_i|
  double balance = 0.0;         // (Σ√|𝒢_i|)²
  double anisotropy_sum = 0.0;  // Σ|𝒢_i|²
};

struct FrobeniusWeights {
  std::vector<double> squared_norms;  // ‖Ĥ_i‖_F²
  std::vector<std::size_t> sizes;     // |𝒢_i|
  StructuralSums sums;
};

[[nodiscard]] StructuralSums structural_sums(const std::vector<std::size_t>& sizes);
[[nodiscard]] FrobeniusWeights frobenius_weights(const VggSet& vgg);

// Text summary: one line per group `index,size,members(space separated),frobenius_sq`.
void write_vgg_summary(std::ostream& out, const VggSet& vgg);

}  // namespace qgk
