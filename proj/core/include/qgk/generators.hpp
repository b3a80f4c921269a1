#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qgk/densela.hpp"

namespace qgk {

enum class Family { Symmetric, Antisymmetric, Diagonal };

[[nodiscard]] const char* to_string(Family f);

struct MatrixEntry {
  Eigen::Index row;
  Eigen::Index col;
  Complex value;
};

/// One Hermitian basis element of su(2^η), stored as its non-zero entries.
///
/// Off-diagonal generators carry two entries and the Cartan ones k+1, so the
/// full η = 8 basis fits in a few megabytes; dense() materializes on demand.
struct Generator {
  Eigen::Index dim = 0;
  Family family = Family::Symmetric;
  std::size_t family_index = 0;
  std::vector<MatrixEntry> entries;

  [[nodiscard]] ComplexMatrix dense() const;
  // target += scale · h
  void add_to(ComplexMatrix& target, double scale = 1.0) const;
};

struct GeneratorSet {
  int eta = 0;
  std::vector<Generator> items;

  [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << eta; }
  [[nodiscard]] std::size_t size() const { return items.size(); }
  [[nodiscard]] std::size_t count(Family f) const;
};

[[nodiscard]] std::size_t generator_count(int eta);

/// Generalized Gell-Mann basis, ordered: for each (r, c) with r < c in
/// lexicographic order the symmetric then the antisymmetric element, followed
/// by the diagonal elements for k = 1 … 2^η − 1.
[[nodiscard]] GeneratorSet build_generator_set(int eta);

struct BasisReport {
  bool count_ok = false;
  bool hermitian_ok = false;
  bool traceless_ok = false;
  bool orthogonal_ok = false;
  std::size_t count = 0;
  std::size_t expected_count = 0;
  double max_hermiticity_deviation = 0.0;
  double max_trace_deviation = 0.0;
  double max_orthogonality_deviation = 0.0;

  [[nodiscard]] bool all_pass() const {
    return count_ok && hermitian_ok && traceless_ok && orthogonal_ok;
  }
  friend bool operator==(const BasisReport&, const BasisReport&) = default;
};

// Checks count, hermiticity, tracelessness and Tr(h_i h_j) = 2δ_ij over all pairs.
[[nodiscard]] BasisReport verify_basis(const GeneratorSet& gs);

using PauliTerm = std::pair<std::string, double>;

/// Real Pauli-string expansion h = Σ c_P·P, labels over {I,X,Y,Z} with qubit 0
/// leftmost. Terms are sorted by label; |c| below 1e-14 are dropped.
/// Throws NumericalError if a coefficient has an imaginary part above 1e-12.
[[nodiscard]] std::vector<PauliTerm> pauli_decompose(const Generator& h);

// Dense 2^η × 2^η matrix of a Pauli string label.
[[nodiscard]] ComplexMatrix pauli_string_matrix(const std::string& label);

/// One line per generator: `<index>,<family>,<label>:<coeff>[;<label>:<coeff>...]`,
/// coefficients at 17 significant digits.
void write_pauli_export(std::ostream& out, const GeneratorSet& gs);

}  // namespace qgk
