#include "qgk/vgg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "qgk/config.hpp"

namespace qgk {

const char* to_string(Scaling s) {
  switch (s) {
    case Scaling::Linear:
      return "linear";
    case Scaling::Quadratic:
      return "quadratic";
    case Scaling::Exponential:
      return "exponential";
    case Scaling::All:
      return "all";
    case Scaling::Explicit:
      return "explicit";
  }
  return "unknown";
}

Scaling parse_scaling(const std::string& name) {
  for (Scaling s : {Scaling::Linear, Scaling::Quadratic, Scaling::Exponential, Scaling::All,
                    Scaling::Explicit}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigurationError("unknown grouping scaling '" + name + "'");
}

std::size_t generators_per_group(int eta) {
  if (eta < 1 || eta > kMaxQubits) {
    throw PreconditionError("qubit count must lie in [1, 8], got " + std::to_string(eta));
  }
  std::size_t gamma = 1;
  for (int e = 3; e <= eta; ++e) gamma = (e % 2) ? 2 * gamma + 1 : 2 * gamma - 1;
  return gamma;
}

std::size_t group_count(int eta, Scaling scaling, std::size_t explicit_groups) {
  const std::size_t total = generator_count(eta);
  const auto e = static_cast<std::size_t>(eta);
  switch (scaling) {
    case Scaling::Linear:
      return e;
    case Scaling::Quadratic:
      return e * e;
    case Scaling::Exponential:
      return 3 * (std::size_t{1} << eta) - 6 * (e % 2) + 3;
    case Scaling::All:
      return total;
    case Scaling::Explicit:
      if (explicit_groups == 0 || explicit_groups > total) {
        throw ConfigurationError("explicit group count must lie in [1, " + std::to_string(total) +
                                 "], got " + std::to_string(explicit_groups));
      }
      return explicit_groups;
  }
  throw ConfigurationError("invalid scaling");
}

std::size_t group_count(const GroupingConfig& config) {
  return group_count(config.eta, config.scaling, config.explicit_groups);
}

bool VggSet::is_strict_partition() const {
  std::vector<int> seen(generator_count, 0);
  for (const auto& members : assignment) {
    if (members.empty()) return false;
    for (std::size_t j : members) {
      if (j >= generator_count || seen[j]++) return false;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

std::vector<std::size_t> interleaved_order(const GeneratorSet& gs) {
  std::vector<std::size_t> by_family[3];
  for (std::size_t i = 0; i < gs.items.size(); ++i) {
    by_family[static_cast<int>(gs.items[i].family)].push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(gs.items.size());
  std::size_t cursor[3] = {0, 0, 0};
  while (order.size() < gs.items.size()) {
    for (int f = 0; f < 3; ++f) {
      if (cursor[f] < by_family[f].size()) order.push_back(by_family[f][cursor[f]++]);
    }
  }
  return order;
}

bool is_permutation(const std::vector<std::size_t>& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

std::vector<std::size_t> stride_permutation(std::size_t total, std::size_t groups, double width,
                                            int eta) {
  if (!(width >= 0.0) || width > static_cast<double>(eta)) {
    throw ConfigurationError("projection width must lie in [0, eta], got " +
                             std::to_string(width));
  }
  std::vector<std::size_t> perm(total);
  for (std::size_t k = 0; k < total; ++k) perm[k] = k;
  if (width == 0.0) return perm;

  const double factor = (width / static_cast<double>(eta)) * static_cast<double>(groups);
  bool in_range = true;
  for (std::size_t k = 0; k < total && in_range; ++k) {
    const double v = std::floor(static_cast<double>(k) * factor);
    if (v >= static_cast<double>(total)) {
      in_range = false;
    } else {
      perm[k] = static_cast<std::size_t>(v);
    }
  }
  if (in_range && is_permutation(perm)) return perm;

  const int exponent = std::max(0, static_cast<int>(std::floor(std::log2(factor))));
  const std::size_t stride = std::size_t{1} << exponent;
  for (std::size_t k = 0; k < total; ++k) perm[k] = (k * stride) % total;
  if (!is_permutation(perm)) {
    throw ConfigurationError("stride " + std::to_string(stride) +
                             " does not yield a bijection on " + std::to_string(total) +
                             " generators");
  }
  return perm;
}

std::vector<std::size_t> group_sizes(std::size_t total, std::size_t groups) {
  std::vector<std::size_t> sizes(groups, total / groups);
  for (std::size_t i = 0; i < total % groups; ++i) ++sizes[i];
  return sizes;
}

VggSet build_vgg_set(const GeneratorSet& gs, const GroupingConfig& config) {
  if (gs.eta != config.eta) {
    throw PreconditionError("generator set has eta=" + std::to_string(gs.eta) +
                            " but grouping config has eta=" + std::to_string(config.eta));
  }
  const std::size_t total = gs.items.size();
  const std::size_t g = group_count(config);
  const bool remainder_allowed =
      config.scaling == Scaling::Linear || config.scaling == Scaling::Quadratic;
  if (total % g != 0 && !remainder_allowed) {
    throw ConfigurationError(std::to_string(g) + " groups do not divide " +
                             std::to_string(total) + " generators");
  }

  VggSet vgg;
  vgg.config = config;
  vgg.generator_count = total;
  vgg.permutation = stride_permutation(total, g, config.width, config.eta);
  const auto order = interleaved_order(gs);
  const auto sizes = group_sizes(total, g);

  vgg.assignment.resize(g);
  std::size_t position = 0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < sizes[i]; ++j) {
      vgg.assignment[i].push_back(order[vgg.permutation[position++]]);
    }
  }

  const Eigen::Index n = gs.dim();
  vgg.operators.reserve(g);
  vgg.eigs.reserve(g);
  for (const auto& members : vgg.assignment) {
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t j : members) gs.items[j].add_to(h);
    vgg.eigs.push_back(hermitian_eig(h));
    vgg.operators.push_back(std::move(h));
  }
  return vgg;
}

RealMatrix assignment_matrix(const VggSet& vgg) {
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(vgg.generator_count),
                                  static_cast<Eigen::Index>(vgg.assignment.size()));
  for (std::size_t i = 0; i < vgg.assignment.size(); ++i) {
    for (std::size_t j : vgg.assignment[i]) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
  }
  return m;
}

std::size_t matrix_rank(const RealMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<RealMatrix> lu(m);
  return static_cast<std::size_t>(lu.rank());
}

std::size_t grouping_rank(const VggSet& vgg) { return matrix_rank(assignment_matrix(vgg)); }

StructuralSums structural_sums(const std::vector<std::size_t>& sizes) {
  StructuralSums s;
  double root_sum = 0.0;
  for (std::size_t size : sizes) {
    const auto v = static_cast<double>(size);
    s.total_mass += v;
    root_sum += std::sqrt(v);
    s.anisotropy_sum += v * v;
  }
  s.balance = root_sum * root_sum;
  return s;
}

FrobeniusWeights frobenius_weights(const VggSet& vgg) {
  FrobeniusWeights w;
  for (std::size_t i = 0; i < vgg.groups(); ++i) {
    w.squared_norms.push_back(vgg.operators[i].squaredNorm());
    w.sizes.push_back(vgg.assignment[i].size());
  }
  w.sums = structural_sums(w.sizes);
  return w;
}

void write_vgg_summary(std::ostream& out, const VggSet& vgg) {
  const auto weights = frobenius_weights(vgg);
  const auto old_precision = out.precision(17);
  out << "group,size,members,frobenius_sq\n";
  for (std::size_t i = 0; i < vgg.groups(); ++i) {
    out << i << ',' << weights.sizes[i] << ',';
    for (std::size_t k = 0; k < vgg.assignment[i].size(); ++k) {
      if (k) out << ' ';
      out << vgg.assignment[i][k];
    }
    out << ',' << weights.squared_norms[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qgk
