#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgk/densela.hpp"
#include "qgk/vgg.hpp"

namespace qgk {

enum class EmbeddingMode { Product, SumExp };
enum class InitialState { UniformSuperposition, GroundState };

[[nodiscard]] const char* to_string(EmbeddingMode m);
[[nodiscard]] const char* to_string(InitialState s);
[[nodiscard]] EmbeddingMode parse_embedding_mode(const std::string& name);
[[nodiscard]] InitialState parse_initial_state(const std::string& name);

struct EmbeddingConfig {
  EmbeddingMode mode = EmbeddingMode::Product;
  InitialState initial_state = InitialState::UniformSuperposition;
};

struct EmbeddedState {
  StateVector psi;
  RealVector phi;
  EmbeddingConfig config;
};

// |Ψ⟩: H^⊗η|0⟩ or |0⟩.
[[nodiscard]] StateVector initial_state(int eta, InitialState kind);

/// ψ = Û_φ|Ψ⟩.
///
/// Product: exp(−iφ_g Ĥ_g)···exp(−iφ_1 Ĥ_1)|Ψ⟩, group 1 applied first.
/// SumExp: exp(−i Σ φ_i Ĥ_i)|Ψ⟩ through one eigendecomposition.
[[nodiscard]] EmbeddedState embed(const VggSet& vgg, std::span<const double> phi,
                                  const EmbeddingConfig& config);

struct EmbeddingGradient {
  EmbeddedState state;
  std::vector<StateVector> tangents;  // ∂ψ/∂φ_i
};

// Product mode only; SumExp raises UnsupportedModeError.
[[nodiscard]] EmbeddingGradient embed_with_gradient(const VggSet& vgg,
                                                    std::span<const double> phi,
                                                    const EmbeddingConfig& config);

/// Vector-Jacobian product ⟨χ|∂ψ/∂φ_i⟩ for all i in one backward sweep, O(g·4^η).
/// `psi` must be the Product-mode embedding of `phi`.
[[nodiscard]] Eigen::VectorXcd embed_vjp(const VggSet& vgg, std::span<const double> phi,
                                         const StateVector& psi, const StateVector& cotangent);

// The full unitary Û_φ (columns = images of the basis states).
[[nodiscard]] ComplexMatrix embedding_unitary(const VggSet& vgg, std::span<const double> phi,
                                              EmbeddingMode mode);

// max |Û†Û − I|.
[[nodiscard]] double unitarity_check(const VggSet& vgg, std::span<const double> phi,
                                     const EmbeddingConfig& config);

}  // namespace qgk
