#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "qgk/densela.hpp"
#include "qgk/embedding.hpp"
#include "qgk/kernel.hpp"
#include "qgk/vgg.hpp"

namespace qgk {

/// Affine feature extractor φ = W·x + b with W ∈ ℝ^{g×d}, b ∈ ℝ^g.
struct ProjectionParams {
  RealMatrix weights;  // g × d
  RealVector bias;     // g

  [[nodiscard]] Eigen::Index groups() const { return weights.rows(); }
  [[nodiscard]] Eigen::Index features() const { return weights.cols(); }
  // γ = d/g
  [[nodiscard]] double compression() const {
    return static_cast<double>(features()) / static_cast<double>(groups());
  }
  [[nodiscard]] RealVector row_norms_squared() const { return weights.rowwise().squaredNorm(); }
};

// ScaledUniform: W ~ U(±√(6/(d+g))). FanScaled: W ~ U(±√(3/(d·g))), so that
// standardized inputs give Σ_i Var(φ_i) = 1 whatever d and g are.
// IdentityLike: W = π·I (d == g). Bias starts at zero in every scheme.
enum class InitScheme { ScaledUniform, FanScaled, IdentityLike };
enum class GradientMode { Analytic, FiniteDifference };

[[nodiscard]] const char* to_string(InitScheme s);
[[nodiscard]] InitScheme parse_init_scheme(const std::string& name);

/// ScaledUniform: W ~ U(±√(6/(d+g))), b = 0. IdentityLike (d = g): W = π·I, b = 0.
[[nodiscard]] ProjectionParams init_params(Eigen::Index d, Eigen::Index g, std::uint64_t seed,
                                           InitScheme scheme = InitScheme::ScaledUniform);

// Row-wise Φ_i = W·x_i + b; X is n × d, Φ is n × g.
[[nodiscard]] RealMatrix project(const ProjectionParams& params, const RealMatrix& x);

struct KtaGradient {
  RealMatrix d_weights;
  RealVector d_bias;
  double loss = 0.0;
  double alignment = 0.0;
};

struct GradientOptions {
  GradientMode mode = GradientMode::Analytic;
  double fd_step = 1e-5;
  TargetScheme target = TargetScheme::Multiclass;
};

// Embeds every row of X after projection.
[[nodiscard]] std::vector<StateVector> embed_rows(const VggSet& vgg, const RealMatrix& phi,
                                                  const EmbeddingConfig& config);

// KTA loss and alignment of the projected embedding.
[[nodiscard]] Alignment kta_of(const ProjectionParams& params, const RealMatrix& x,
                               std::span<const int> labels, const VggSet& vgg,
                               const EmbeddingConfig& config,
                               TargetScheme target = TargetScheme::Multiclass);

/// ∂L_KTA/∂W and ∂L_KTA/∂b.
///
/// Analytic mode chains the KTA quotient rule through
/// ∂K_ab/∂φ^(a)_i = 2·Re(conj⟨ψ_b|ψ_a⟩·⟨ψ_b|∂ψ_a/∂φ_i⟩) using one adjoint sweep
/// per sample; it needs the product embedding. FiniteDifference uses central
/// differences with step `fd_step` over every parameter.
[[nodiscard]] KtaGradient kta_gradient(const ProjectionParams& params, const RealMatrix& x,
                                       std::span<const int> labels, const VggSet& vgg,
                                       const EmbeddingConfig& config,
                                       const GradientOptions& options = {});

struct TrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.0;  // ≤ 0 → 10^{−(η−1)}
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 0;  // 0 → full batch up to 512 samples, else 256
  std::uint64_t seed = 0;
  GradientOptions gradient;
};

[[nodiscard]] double default_learning_rate(int eta);

struct TraceRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double alignment = 0.0;
  double seconds = 0.0;
};

// Epoch e holds the (mean batch) loss evaluated before the e-th round of updates.
struct TrainTrace {
  std::vector<TraceRecord> records;
};

struct TrainResult {
  ProjectionParams params;
  TrainTrace trace;
  double initial_alignment = 0.0;
  double final_alignment = 0.0;
  double final_loss = 1.0;
};

/// Adam on the KTA loss. Deterministic for a fixed seed, config and input order.
/// Throws NumericalError if the loss turns non-finite.
[[nodiscard]] TrainResult train(const ProjectionParams& initial, const RealMatrix& x,
                                std::span<const int> labels, const VggSet& vgg,
                                const EmbeddingConfig& embed_config, const TrainConfig& config);

void write_trace_csv(std::ostream& out, const TrainTrace& trace, bool include_seconds = true);

struct Checkpoint {
  ProjectionParams params;
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
};

/// Text checkpoint: `d g seed epoch` header, then W row-major (one row per
/// line), then b, all at 17 significant digits.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qgk
