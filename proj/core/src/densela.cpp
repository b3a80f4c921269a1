#include "qgk/densela.hpp"

#include <cmath>
#include <string>

#include "qgk/config.hpp"

namespace qgk {

ComplexMatrix EigenDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw PreconditionError("hermitian_eig: matrix must be square and non-empty, got " +
                            std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
  }
  if (!h.allFinite()) {
    throw PreconditionError("hermitian_eig: non-finite entry");
  }
  const double dev = hermiticity_deviation(h);
  if (dev >= Tolerances::hermitian_input) {
    throw PreconditionError("hermitian_eig: input is not Hermitian (‖H−H†‖∞ = " +
                            std::to_string(dev) + ")");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigen solver did not converge");
  }

  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    auto col = out.eigenvectors.col(c);
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      const double mag = std::abs(col(r));
      if (mag > Tolerances::phase_anchor) {
        col *= std::conj(col(r)) / mag;
        col(r) = Complex(col(r).real(), 0.0);
        break;
      }
    }
  }
  return out;
}

namespace {

RealVector phases_argument(const EigenDecomposition& d, double phi) {
  return -phi * d.eigenvalues;
}

}  // namespace

StateVector expi_apply(const EigenDecomposition& decomp, double phi, const StateVector& v) {
  if (v.size() != decomp.dim()) {
    throw PreconditionError("expi_apply: dimension mismatch (" + std::to_string(v.size()) +
                            " vs " + std::to_string(decomp.dim()) + ")");
  }
  if (phi == 0.0) return v;
  StateVector coeffs = decomp.eigenvectors.adjoint() * v;
  const RealVector arg = phases_argument(decomp, phi);
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= Complex(std::cos(arg(k)), std::sin(arg(k)));
  }
  return decomp.eigenvectors * coeffs;
}

ComplexMatrix expi_matrix(const EigenDecomposition& decomp, double phi) {
  const RealVector arg = phases_argument(decomp, phi);
  Eigen::VectorXcd diag(arg.size());
  for (Eigen::Index k = 0; k < arg.size(); ++k) {
    diag(k) = Complex(std::cos(arg(k)), std::sin(arg(k)));
  }
  return decomp.eigenvectors * diag.asDiagonal() * decomp.eigenvectors.adjoint();
}

int qubits_for_dim(Eigen::Index dim) {
  int eta = 0;
  while ((Eigen::Index{1} << eta) < dim) ++eta;
  if (dim <= 0 || (Eigen::Index{1} << eta) != dim) {
    throw PreconditionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return eta;
}

ComplexMatrix partial_trace_single_qubit(const StateVector& psi, int keep, int eta) {
  if (eta < 1 || eta > 30 || psi.size() != (Eigen::Index{1} << eta)) {
    throw PreconditionError("partial_trace_single_qubit: state dimension does not match 2^eta");
  }
  if (keep < 0 || keep >= eta) {
    throw PreconditionError("partial_trace_single_qubit: qubit index " + std::to_string(keep) +
                            " out of range [0, " + std::to_string(eta) + ")");
  }
  const Eigen::Index bit = Eigen::Index{1} << (eta - 1 - keep);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = psi(i);
    const Complex a1 = psi(i | bit);
    rho(0, 0) += std::norm(a0);
    rho(1, 1) += std::norm(a1);
    rho(0, 1) += a0 * std::conj(a1);
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

}  // namespace qgk
