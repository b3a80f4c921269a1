#include "qgk/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "qgk/config.hpp"
#include "qgk/kernel.hpp"
#include "qgk/random.hpp"

namespace qgk {

double meyer_wallach(const StateVector& psi, int eta) {
  if (std::abs(psi.norm() - 1.0) > Tolerances::state_norm) {
    throw PreconditionError("meyer_wallach: state is not normalized (‖ψ‖ = " +
                            std::to_string(psi.norm()) + ")");
  }
  double purity_sum = 0.0;
  for (int k = 0; k < eta; ++k) {
    const ComplexMatrix rho = partial_trace_single_qubit(psi, k, eta);
    purity_sum += (rho * rho).trace().real();
  }
  const double q = 2.0 * (1.0 - purity_sum / static_cast<double>(eta));
  return std::clamp(q, 0.0, 1.0);
}

namespace {

std::vector<double> draw(CounterRng& rng, std::size_t g, SamplingRange range) {
  std::vector<double> phi(g);
  for (auto& v : phi) v = rng.uniform(range.lo, range.hi);
  return phi;
}

}  // namespace

EntanglementStats entanglement_capability(const VggSet& vgg, const EmbeddingConfig& config,
                                          std::size_t samples, std::uint64_t seed,
                                          SamplingRange range) {
  if (samples == 0) throw PreconditionError("entanglement_capability: need at least one sample");
  CounterRng rng(seed, 0xE7A7);
  EntanglementStats stats;
  stats.samples.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto phi = draw(rng, vgg.groups(), range);
    stats.samples.push_back(meyer_wallach(embed(vgg, phi, config).psi, vgg.eta()));
  }
  double sum = 0.0;
  for (double q : stats.samples) {
    sum += q;
    stats.max = std::max(stats.max, q);
  }
  stats.mean = sum / static_cast<double>(samples);
  double var = 0.0;
  for (double q : stats.samples) var += (q - stats.mean) * (q - stats.mean);
  stats.std = std::sqrt(var / static_cast<double>(samples));
  return stats;
}

double expressibility(const VggSet& vgg, const EmbeddingConfig& config, std::size_t n,
                      std::uint64_t seed, SamplingRange range) {
  if (n < 4) throw PreconditionError("expressibility: need at least four samples");
  CounterRng rng(seed, 0xE4B5);
  std::vector<StateVector> states;
  states.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto phi = draw(rng, vgg.groups(), range);
    states.push_back(embed(vgg, phi, config).psi);
  }
  return spectral_concentration(gram(states).values);
}

std::uint64_t parameter_count(int eta, EncodingMethod method) {
  if (eta < 1 || eta > 31) throw PreconditionError("parameter_count: eta out of range");
  switch (method) {
    case EncodingMethod::Qgk:
      return (std::uint64_t{1} << (2 * eta)) - 1;
    case EncodingMethod::Amplitude:
      return (std::uint64_t{1} << (eta + 1)) - 1;
    case EncodingMethod::Angle:
      return static_cast<std::uint64_t>(eta);
  }
  return 0;
}

BoundReport bound_report(const VggSet& vgg, const ProjectionParams* params) {
  BoundReport r;
  std::vector<std::size_t> sizes;
  for (const auto& members : vgg.assignment) sizes.push_back(members.size());
  r.sums = structural_sums(sizes);
  if (r.sums.total_mass > 0.0) r.anisotropy_ratio = r.sums.anisotropy_sum / r.sums.total_mass;
  if (r.sums.balance > 0.0) r.lower_ratio = r.sums.total_mass / r.sums.balance;
  r.balanced = !sizes.empty() &&
               std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s == sizes[0]; });
  if (r.balanced) r.group_size = sizes.front();

  if (params) {
    if (static_cast<std::size_t>(params->groups()) != sizes.size()) {
      throw PreconditionError("bound_report: projection rows do not match group count");
    }
    r.reweighted = true;
    const RealVector w = params->row_norms_squared();
    double root_sum = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double size = static_cast<double>(sizes[i]);
      const double wi = w(static_cast<Eigen::Index>(i));
      r.rw_total_mass += size * wi;
      root_sum += std::sqrt(size) * std::sqrt(wi);
      r.rw_anisotropy_sum += size * size * wi * wi;
    }
    r.rw_balance = root_sum * root_sum;
    if (r.rw_total_mass > 0.0) r.rw_anisotropy_ratio = r.rw_anisotropy_sum / r.rw_total_mass;
    if (r.rw_balance > 0.0) r.rw_lower_ratio = r.rw_total_mass / r.rw_balance;
  }
  return r;
}

MetricsReport compute_metrics(const VggSet& vgg, const MetricsOptions& options) {
  MetricsReport rep;
  rep.eta = vgg.eta();
  rep.grouping = vgg.config;
  rep.groups = vgg.groups();
  rep.embedding = options.embedding;
  rep.seed = options.seed;
  rep.range = options.range;
  rep.entanglement_samples = options.entanglement_samples;
  rep.expressibility_samples = options.expressibility_samples;
  rep.entanglement = entanglement_capability(vgg, options.embedding, options.entanglement_samples,
                                             options.seed, options.range);
  rep.expressibility = expressibility(vgg, options.embedding, options.expressibility_samples,
                                      options.seed, options.range);
  rep.parameter_count = parameter_count(vgg.eta(), EncodingMethod::Qgk);
  rep.bounds = bound_report(vgg);
  return rep;
}

void write_metrics_report(std::ostream& out, const MetricsReport& r) {
  const auto old_precision = out.precision(17);
  out << "eta=" << r.eta << '\n'
      << "scaling=" << to_string(r.grouping.scaling) << '\n'
      << "width=" << r.grouping.width << '\n'
      << "groups=" << r.groups << '\n'
      << "mode=" << to_string(r.embedding.mode) << '\n'
      << "initial_state=" << to_string(r.embedding.initial_state) << '\n'
      << "seed=" << r.seed << '\n'
      << "distribution=uniform(" << r.range.lo << ',' << r.range.hi << ")\n"
      << "entanglement_samples=" << r.entanglement_samples << '\n'
      << "entanglement_mean=" << r.entanglement.mean << '\n'
      << "entanglement_max=" << r.entanglement.max << '\n'
      << "entanglement_std=" << r.entanglement.std << '\n'
      << "expressibility_samples=" << r.expressibility_samples << '\n'
      << "expressibility=" << r.expressibility << '\n'
      << "parameter_count=" << r.parameter_count << '\n'
      << "total_mass=" << r.bounds.sums.total_mass << '\n'
      << "balance=" << r.bounds.sums.balance << '\n'
      << "anisotropy_sum=" << r.bounds.sums.anisotropy_sum << '\n'
      << "anisotropy_ratio=" << r.bounds.anisotropy_ratio << '\n'
      << "lower_ratio=" << r.bounds.lower_ratio << '\n';
  if (r.bounds.reweighted) {
    out << "rw_total_mass=" << r.bounds.rw_total_mass << '\n'
        << "rw_balance=" << r.bounds.rw_balance << '\n'
        << "rw_anisotropy_sum=" << r.bounds.rw_anisotropy_sum << '\n'
        << "rw_anisotropy_ratio=" << r.bounds.rw_anisotropy_ratio << '\n';
  }
  out.precision(old_precision);
}

void write_entanglement_samples(std::ostream& out, const EntanglementStats& stats) {
  const auto old_precision = out.precision(17);
  out << "sample,q\n";
  for (std::size_t i = 0; i < stats.samples.size(); ++i) out << i << ',' << stats.samples[i] << '\n';
  out.precision(old_precision);
}

}  // namespace qgk
