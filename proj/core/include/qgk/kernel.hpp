#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qgk/densela.hpp"
#include "qgk/embedding.hpp"

namespace qgk {

using Provenance = std::map<std::string, std::string>;

/// Symmetric (train) or rectangular (test × train) kernel block.
struct KernelMatrix {
  RealMatrix values;
  Provenance provenance;

  [[nodiscard]] Eigen::Index n() const { return values.rows(); }
};

struct TargetKernel {
  RealMatrix values;
};

enum class TargetScheme { Binary, Multiclass };

[[nodiscard]] const char* to_string(TargetScheme s);
[[nodiscard]] TargetScheme parse_target_scheme(const std::string& name);

/// Fidelity Gram matrix K_ij = |⟨ψ_j|ψ_i⟩|², computed as S·S† on the stacked
/// n × 2^η state matrix followed by an elementwise squared modulus.
[[nodiscard]] KernelMatrix gram(std::span<const StateVector> states);
[[nodiscard]] KernelMatrix gram(std::span<const EmbeddedState> states);

// |⟨ψ_b|ψ_a⟩|² for a ∈ rows, b ∈ cols.
[[nodiscard]] KernelMatrix cross_gram(std::span<const StateVector> rows,
                                      std::span<const StateVector> cols);

// Stacks states as the rows of an n × dim matrix.
[[nodiscard]] ComplexMatrix stack_states(std::span<const StateVector> states);

struct Alignment {
  double alignment = 0.0;
  double loss = 1.0;
};

// alignment = Tr(KY)/(‖K‖_F‖Y‖_F), loss = 1 − alignment.
[[nodiscard]] Alignment kta(const RealMatrix& k, const RealMatrix& y);
[[nodiscard]] Alignment kta(const KernelMatrix& k, const TargetKernel& y);

/// Binary: Y_ij = y_i·y_j with the smaller class id ↦ −1, the larger ↦ +1.
/// Multiclass: 1 on equal labels, −1/(C−1) otherwise.
[[nodiscard]] TargetKernel target_kernel(std::span<const int> labels, TargetScheme scheme);

struct ClassicalKernel {
  enum class Kind { Rbf, Linear } kind = Kind::Rbf;
  double rbf_gamma = 0.0;  // 0 → 1/(d·Var(X))

  [[nodiscard]] static ClassicalKernel rbf(double gamma = 0.0) { return {Kind::Rbf, gamma}; }
  [[nodiscard]] static ClassicalKernel linear() { return {Kind::Linear, 0.0}; }
};

// 1/(d·Var(X)) over all entries; 1.0 if the variance vanishes.
[[nodiscard]] double default_rbf_gamma(const RealMatrix& x);

[[nodiscard]] KernelMatrix classical_kernel(const RealMatrix& x, const ClassicalKernel& family);
// rows × cols block; an unset RBF bandwidth is resolved from `cols`.
[[nodiscard]] KernelMatrix classical_cross_kernel(const RealMatrix& rows, const RealMatrix& cols,
                                                  const ClassicalKernel& family);

/// E(K) = Σ λ_i log(n·λ_i) over the spectrum clipped at 0 and normalized to
/// unit sum (0·log 0 = 0). Throws DegenerateInputError on a zero spectrum.
[[nodiscard]] double spectral_concentration(const RealMatrix& k);

struct KernelDiagnostics {
  double symmetry_deviation = 0.0;
  double diagonal_deviation = 0.0;   // max |K_ii − 1|
  double min_entry = 0.0;
  double max_entry = 0.0;
  double min_eigenvalue = 0.0;

  // Quantum-kernel invariants at the library tolerances.
  [[nodiscard]] bool valid_fidelity_kernel(Eigen::Index n) const;
};

[[nodiscard]] KernelDiagnostics diagnose(const RealMatrix& k);

/// Headerless CSV of 17-significant-digit values plus `<path>.meta` holding
/// provenance as key=value lines.
void save_kernel(const std::filesystem::path& path, const KernelMatrix& k);
[[nodiscard]] KernelMatrix load_kernel(const std::filesystem::path& path);

}  // namespace qgk
