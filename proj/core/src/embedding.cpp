#include "qgk/embedding.hpp"

#include <cmath>
#include <string>

#include "qgk/config.hpp"

namespace qgk {

const char* to_string(EmbeddingMode m) {
  return m == EmbeddingMode::Product ? "product" : "sumexp";
}

const char* to_string(InitialState s) {
  return s == InitialState::UniformSuperposition ? "uniform" : "ground";
}

EmbeddingMode parse_embedding_mode(const std::string& name) {
  if (name == "product") return EmbeddingMode::Product;
  if (name == "sumexp") return EmbeddingMode::SumExp;
  throw ConfigurationError("unknown embedding mode '" + name + "'");
}

InitialState parse_initial_state(const std::string& name) {
  if (name == "uniform") return InitialState::UniformSuperposition;
  if (name == "ground") return InitialState::GroundState;
  throw ConfigurationError("unknown initial state '" + name + "'");
}

StateVector initial_state(int eta, InitialState kind) {
  const Eigen::Index n = Eigen::Index{1} << eta;
  if (kind == InitialState::GroundState) {
    StateVector v = StateVector::Zero(n);
    v(0) = 1.0;
    return v;
  }
  return StateVector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

namespace {

void check_phi(const VggSet& vgg, std::span<const double> phi) {
  if (phi.size() != vgg.groups()) {
    throw PreconditionError("embed: parameter vector has length " + std::to_string(phi.size()) +
                            ", expected " + std::to_string(vgg.groups()));
  }
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!std::isfinite(phi[i])) {
      throw PreconditionError("embed: parameter " + std::to_string(i) + " is not finite");
    }
  }
}

ComplexMatrix summed_hamiltonian(const VggSet& vgg, std::span<const double> phi) {
  ComplexMatrix h = ComplexMatrix::Zero(vgg.dim(), vgg.dim());
  for (std::size_t i = 0; i < phi.size(); ++i) h += phi[i] * vgg.operators[i];
  // Round-off can leave a ~1e-17 anti-Hermitian part; symmetrize exactly.
  return (0.5 * (h + h.adjoint())).eval();
}

StateVector apply_product(const VggSet& vgg, std::span<const double> phi, StateVector v) {
  for (std::size_t i = 0; i < phi.size(); ++i) v = expi_apply(vgg.eigs[i], phi[i], v);
  return v;
}

}  // namespace

EmbeddedState embed(const VggSet& vgg, std::span<const double> phi,
                    const EmbeddingConfig& config) {
  check_phi(vgg, phi);
  EmbeddedState out;
  out.config = config;
  out.phi = Eigen::Map<const RealVector>(phi.data(), static_cast<Eigen::Index>(phi.size()));
  StateVector psi0 = initial_state(vgg.eta(), config.initial_state);
  if (config.mode == EmbeddingMode::Product) {
    out.psi = apply_product(vgg, phi, std::move(psi0));
  } else {
    const auto decomp = hermitian_eig(summed_hamiltonian(vgg, phi));
    out.psi = expi_apply(decomp, 1.0, psi0);
  }
  return out;
}

EmbeddingGradient embed_with_gradient(const VggSet& vgg, std::span<const double> phi,
                                      const EmbeddingConfig& config) {
  if (config.mode != EmbeddingMode::Product) {
    throw UnsupportedModeError(
        "embed_with_gradient: analytic gradients exist only for the product embedding");
  }
  check_phi(vgg, phi);
  const std::size_t g = phi.size();
  EmbeddingGradient out;
  out.state.config = config;
  out.state.phi = Eigen::Map<const RealVector>(phi.data(), static_cast<Eigen::Index>(g));

  // Forward: prefix states s_i = U_i···U_1|Ψ⟩.
  std::vector<StateVector> prefix(g + 1);
  prefix[0] = initial_state(vgg.eta(), config.initial_state);
  for (std::size_t i = 0; i < g; ++i) prefix[i + 1] = expi_apply(vgg.eigs[i], phi[i], prefix[i]);
  out.state.psi = prefix[g];

  // Backward: suffix = U_g···U_{i+1}; ∂ψ/∂φ_i = suffix·(−iĤ_i)·s_i.
  out.tangents.resize(g);
  ComplexMatrix suffix = ComplexMatrix::Identity(vgg.dim(), vgg.dim());
  const Complex minus_i(0.0, -1.0);
  for (std::size_t k = g; k-- > 0;) {
    out.tangents[k] = suffix * (minus_i * (vgg.operators[k] * prefix[k + 1]));
    suffix = suffix * expi_matrix(vgg.eigs[k], phi[k]);
  }
  return out;
}

Eigen::VectorXcd embed_vjp(const VggSet& vgg, std::span<const double> phi,
                           const StateVector& psi, const StateVector& cotangent) {
  check_phi(vgg, phi);
  const std::size_t g = phi.size();
  Eigen::VectorXcd grad(static_cast<Eigen::Index>(g));
  // s tracks U_i···U_1|Ψ⟩ and lambda tracks (U_g···U_{i+1})†χ, both walked back
  // from the output by undoing one factor at a time.
  StateVector s = psi;
  StateVector lambda = cotangent;
  const Complex minus_i(0.0, -1.0);
  for (std::size_t k = g; k-- > 0;) {
    grad(static_cast<Eigen::Index>(k)) = minus_i * lambda.dot(vgg.operators[k] * s);
    s = expi_apply(vgg.eigs[k], -phi[k], s);
    lambda = expi_apply(vgg.eigs[k], -phi[k], lambda);
  }
  return grad;
}

ComplexMatrix embedding_unitary(const VggSet& vgg, std::span<const double> phi,
                                EmbeddingMode mode) {
  check_phi(vgg, phi);
  const Eigen::Index n = vgg.dim();
  if (mode == EmbeddingMode::SumExp) {
    return expi_matrix(hermitian_eig(summed_hamiltonian(vgg, phi)), 1.0);
  }
  ComplexMatrix u(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    StateVector e = StateVector::Zero(n);
    e(c) = 1.0;
    u.col(c) = apply_product(vgg, phi, std::move(e));
  }
  return u;
}

double unitarity_check(const VggSet& vgg, std::span<const double> phi,
                       const EmbeddingConfig& config) {
  const ComplexMatrix u = embedding_unitary(vgg, phi, config.mode);
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace qgk
