#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qgk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Spectral factorization H = V·diag(λ)·V† of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector column is phase-fixed so its
/// first non-negligible component is real and positive, which makes the
/// factorization reproducible across runs.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  [[nodiscard]] Eigen::Index dim() const { return eigenvalues.size(); }
  [[nodiscard]] ComplexMatrix reconstruct() const;
};

[[nodiscard]] double max_abs(const ComplexMatrix& m);
[[nodiscard]] double hermiticity_deviation(const ComplexMatrix& m);

// Throws PreconditionError for non-square or non-Hermitian input.
[[nodiscard]] EigenDecomposition hermitian_eig(const ComplexMatrix& h);

// exp(−i·phi·H)·v using the factorization of H.
[[nodiscard]] StateVector expi_apply(const EigenDecomposition& decomp, double phi,
                                     const StateVector& v);

// exp(−i·phi·H) as a dense matrix.
[[nodiscard]] ComplexMatrix expi_matrix(const EigenDecomposition& decomp, double phi);

/// Reduced density matrix of one qubit, ρ_k = Tr_{¬k} |ψ⟩⟨ψ|.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
/// the computational-basis index.
[[nodiscard]] ComplexMatrix partial_trace_single_qubit(const StateVector& psi, int keep,
                                                       int eta);

// Number of qubits for a power-of-two dimension; throws otherwise.
[[nodiscard]] int qubits_for_dim(Eigen::Index dim);

}  // namespace qgk
