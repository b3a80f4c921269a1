#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgk/densela.hpp"
#include "qgk/embedding.hpp"
#include "qgk/projection.hpp"
#include "qgk/vgg.hpp"

namespace qgk {

/// Meyer-Wallach Q = 2(1 − (1/η)·Σ_k Tr ρ_k²).
/// Throws PreconditionError if ‖ψ‖ deviates from 1 by more than 1e-10.
[[nodiscard]] double meyer_wallach(const StateVector& psi, int eta);

// Parameter sampling range for capability metrics, U(lo, hi)^g.
struct SamplingRange {
  double lo = -3.141592653589793;
  double hi = 3.141592653589793;
};

struct EntanglementStats {
  double mean = 0.0;
  double max = 0.0;
  double std = 0.0;
  std::vector<double> samples;
};

[[nodiscard]] EntanglementStats entanglement_capability(const VggSet& vgg,
                                                        const EmbeddingConfig& config,
                                                        std::size_t samples, std::uint64_t seed,
                                                        SamplingRange range = {});

// E(K) of the fidelity Gram matrix of n i.i.d. parameter draws.
[[nodiscard]] double expressibility(const VggSet& vgg, const EmbeddingConfig& config,
                                    std::size_t n, std::uint64_t seed, SamplingRange range = {});

enum class EncodingMethod { Qgk, Amplitude, Angle };

// QGK: 4^η − 1, amplitude: 2^{η+1} − 1, angle: η.
[[nodiscard]] std::uint64_t parameter_count(int eta, EncodingMethod method);

struct BoundReport {
  StructuralSums sums;
  double anisotropy_ratio = 0.0;  // Σ|𝒢|² / Σ|𝒢|
  double lower_ratio = 0.0;       // Σ|𝒢| / (Σ√|𝒢|)²
  bool balanced = false;
  std::size_t group_size = 0;     // Γ when balanced
  bool reweighted = false;
  // Same quantities with |𝒢_i| replaced by |𝒢_i|·‖W_i,:‖².
  double rw_total_mass = 0.0;       // Σ|𝒢_i|·w_i
  double rw_balance = 0.0;          // (Σ√|𝒢_i|·√w_i)²
  double rw_anisotropy_sum = 0.0;   // Σ|𝒢_i|²·w_i²
  double rw_anisotropy_ratio = 0.0;
  double rw_lower_ratio = 0.0;
};

[[nodiscard]] BoundReport bound_report(const VggSet& vgg,
                                       const ProjectionParams* params = nullptr);

struct MetricsReport {
  int eta = 0;
  GroupingConfig grouping;
  std::size_t groups = 0;
  EmbeddingConfig embedding;
  EntanglementStats entanglement;
  double expressibility = 0.0;
  std::size_t entanglement_samples = 0;
  std::size_t expressibility_samples = 0;
  std::uint64_t seed = 0;
  SamplingRange range;
  std::uint64_t parameter_count = 0;
  BoundReport bounds;
};

struct MetricsOptions {
  std::size_t entanglement_samples = 200;
  std::size_t expressibility_samples = 128;
  std::uint64_t seed = 0;
  SamplingRange range;
  EmbeddingConfig embedding;
};

[[nodiscard]] MetricsReport compute_metrics(const VggSet& vgg, const MetricsOptions& options);

// Flat key=value export.
void write_metrics_report(std::ostream& out, const MetricsReport& report);
// CSV with columns sample,q.
void write_entanglement_samples(std::ostream& out, const EntanglementStats& stats);

}  // namespace qgk
