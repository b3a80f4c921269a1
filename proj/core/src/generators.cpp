#include "qgk/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>

#include "qgk/config.hpp"

namespace qgk {

const char* to_string(Family f) {
  switch (f) {
    case Family::Symmetric:
      return "symmetric";
    case Family::Antisymmetric:
      return "antisymmetric";
    case Family::Diagonal:
      return "diagonal";
  }
  return "unknown";
}

ComplexMatrix Generator::dense() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  add_to(m);
  return m;
}

void Generator::add_to(ComplexMatrix& target, double scale) const {
  for (const auto& e : entries) target(e.row, e.col) += scale * e.value;
}

std::size_t GeneratorSet::count(Family f) const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [f](const Generator& g) { return g.family == f; }));
}

std::size_t generator_count(int eta) {
  if (eta < 1 || eta > kMaxQubits) {
    throw PreconditionError("qubit count must lie in [1, 8], got " + std::to_string(eta));
  }
  return (std::size_t{1} << (2 * eta)) - 1;
}

GeneratorSet build_generator_set(int eta) {
  const std::size_t total = generator_count(eta);
  GeneratorSet gs;
  gs.eta = eta;
  gs.items.reserve(total);
  const Eigen::Index n = gs.dim();
  const Complex i_unit(0.0, 1.0);

  std::size_t sym = 0;
  std::size_t anti = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      gs.items.push_back({n, Family::Symmetric, sym++, {{r, c, 1.0}, {c, r, 1.0}}});
      gs.items.push_back({n, Family::Antisymmetric, anti++, {{r, c, -i_unit}, {c, r, i_unit}}});
    }
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    const double norm = std::sqrt(2.0 / static_cast<double>(k * (k + 1)));
    Generator g{n, Family::Diagonal, static_cast<std::size_t>(k - 1), {}};
    g.entries.reserve(static_cast<std::size_t>(k + 1));
    for (Eigen::Index m = 0; m < k; ++m) g.entries.push_back({m, m, norm});
    g.entries.push_back({k, k, -static_cast<double>(k) * norm});
    gs.items.push_back(std::move(g));
  }
  return gs;
}

BasisReport verify_basis(const GeneratorSet& gs) {
  BasisReport rep;
  rep.count = gs.items.size();
  rep.expected_count = (gs.eta >= 1 && gs.eta <= kMaxQubits) ? generator_count(gs.eta) : 0;
  rep.count_ok = rep.count == rep.expected_count;

  for (std::size_t j = 0; j < gs.items.size(); ++j) {
    const ComplexMatrix hj = gs.items[j].dense();
    rep.max_hermiticity_deviation =
        std::max(rep.max_hermiticity_deviation, hermiticity_deviation(hj));
    rep.max_trace_deviation = std::max(rep.max_trace_deviation, std::abs(hj.trace()));
    // Tr(h_i h_j) = Σ_(r,c)∈nz(h_i) h_i[r,c]·h_j[c,r]
    for (std::size_t i = 0; i <= j; ++i) {
      Complex tr = 0.0;
      for (const auto& e : gs.items[i].entries) tr += e.value * hj(e.col, e.row);
      const double expected = (i == j) ? 2.0 : 0.0;
      rep.max_orthogonality_deviation =
          std::max(rep.max_orthogonality_deviation, std::abs(tr - expected));
    }
  }
  rep.hermitian_ok = rep.max_hermiticity_deviation < Tolerances::generator_structure;
  rep.traceless_ok = rep.max_trace_deviation < Tolerances::generator_structure;
  rep.orthogonal_ok = rep.max_orthogonality_deviation < Tolerances::generator_orthogonality;
  return rep;
}

namespace {

std::string pauli_label(std::uint64_t flip, std::uint64_t zmask, int eta) {
  std::string label(static_cast<std::size_t>(eta), 'I');
  for (int q = 0; q < eta; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (eta - 1 - q);
    const bool f = flip & bit;
    const bool z = zmask & bit;
    label[static_cast<std::size_t>(q)] = f ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return label;
}

}  // namespace

std::vector<PauliTerm> pauli_decompose(const Generator& h) {
  const int eta = qubits_for_dim(h.dim);
  const std::uint64_t n = static_cast<std::uint64_t>(h.dim);
  // For a string with flip mask f and phase mask s: P[c, r] is non-zero only
  // when r ^ c = f, with value (−i)^{#Y}·(−1)^{popcount(s & c)}. The
  // coefficient is Tr(P h)/2^η = Σ_entries h[r,c]·P[c,r] / 2^η.
  std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> acc;
  for (const auto& e : h.entries) {
    const auto r = static_cast<std::uint64_t>(e.row);
    const auto c = static_cast<std::uint64_t>(e.col);
    const std::uint64_t flip = r ^ c;
    for (std::uint64_t s = 0; s < n; ++s) {
      const int ny = std::popcount(flip & s);
      static const Complex minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
      Complex p = minus_i_pow[ny % 4];
      if (std::popcount(s & c) % 2) p = -p;
      acc[{flip, s}] += e.value * p;
    }
  }
  std::vector<PauliTerm> terms;
  for (const auto& [key, sum] : acc) {
    const Complex coeff = sum / static_cast<double>(n);
    if (std::abs(coeff.imag()) > Tolerances::pauli_imaginary) {
      throw NumericalError("pauli_decompose: coefficient has imaginary part " +
                           std::to_string(coeff.imag()));
    }
    if (std::abs(coeff.real()) < 1e-14) continue;
    terms.emplace_back(pauli_label(key.first, key.second, eta), coeff.real());
  }
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.first < b.first; });
  return terms;
}

ComplexMatrix pauli_string_matrix(const std::string& label) {
  ComplexMatrix m = ComplexMatrix::Identity(1, 1);
  for (char ch : label) {
    ComplexMatrix p(2, 2);
    switch (ch) {
      case 'I':
        p << 1, 0, 0, 1;
        break;
      case 'X':
        p << 0, 1, 1, 0;
        break;
      case 'Y':
        p << 0, Complex(0, -1), Complex(0, 1), 0;
        break;
      case 'Z':
        p << 1, 0, 0, -1;
        break;
      default:
        throw PreconditionError(std::string("invalid Pauli character '") + ch + "'");
    }
    ComplexMatrix next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      for (Eigen::Index b = 0; b < m.cols(); ++b) {
        next.block(2 * a, 2 * b, 2, 2) = m(a, b) * p;
      }
    }
    m = std::move(next);
  }
  return m;
}

void write_pauli_export(std::ostream& out, const GeneratorSet& gs) {
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < gs.items.size(); ++i) {
    out << i << ',' << to_string(gs.items[i].family) << ',';
    const auto terms = pauli_decompose(gs.items[i]);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t) out << ';';
      out << terms[t].first << ':' << terms[t].second;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qgk
