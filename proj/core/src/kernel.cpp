#include "qgk/kernel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "qgk/config.hpp"

namespace qgk {

const char* to_string(TargetScheme s) {
  return s == TargetScheme::Binary ? "binary" : "multiclass";
}

TargetScheme parse_target_scheme(const std::string& name) {
  if (name == "binary") return TargetScheme::Binary;
  if (name == "multiclass") return TargetScheme::Multiclass;
  throw ConfigurationError("unknown target scheme '" + name + "'");
}

ComplexMatrix stack_states(std::span<const StateVector> states) {
  if (states.empty()) throw PreconditionError("gram: empty state list");
  const Eigen::Index dim = states.front().size();
  ComplexMatrix s(static_cast<Eigen::Index>(states.size()), dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != dim) {
      throw PreconditionError("gram: state " + std::to_string(i) + " has dimension " +
                              std::to_string(states[i].size()) + ", expected " +
                              std::to_string(dim));
    }
    s.row(static_cast<Eigen::Index>(i)) = states[i].transpose();
  }
  return s;
}

KernelMatrix gram(std::span<const StateVector> states) {
  const ComplexMatrix s = stack_states(states);
  // overlaps(i, j) = Σ_k ψ_i[k]·conj(ψ_j[k]) = ⟨ψ_j|ψ_i⟩
  const ComplexMatrix overlaps = s * s.adjoint();
  KernelMatrix k;
  k.values = overlaps.cwiseAbs2();
  k.values = (0.5 * (k.values + k.values.transpose())).eval();
  k.values.diagonal().setOnes();
  k.provenance["family"] = "qgk";
  k.provenance["n"] = std::to_string(states.size());
  return k;
}

KernelMatrix gram(std::span<const EmbeddedState> states) {
  std::vector<StateVector> psis;
  psis.reserve(states.size());
  for (const auto& s : states) psis.push_back(s.psi);
  KernelMatrix k = gram(std::span<const StateVector>(psis));
  if (!states.empty()) {
    k.provenance["mode"] = to_string(states.front().config.mode);
    k.provenance["initial_state"] = to_string(states.front().config.initial_state);
  }
  return k;
}

KernelMatrix cross_gram(std::span<const StateVector> rows, std::span<const StateVector> cols) {
  const ComplexMatrix a = stack_states(rows);
  const ComplexMatrix b = stack_states(cols);
  if (a.cols() != b.cols()) throw PreconditionError("cross_gram: dimension mismatch");
  KernelMatrix k;
  k.values = (a * b.adjoint()).cwiseAbs2();
  k.provenance["family"] = "qgk";
  k.provenance["rows"] = std::to_string(rows.size());
  k.provenance["cols"] = std::to_string(cols.size());
  return k;
}

Alignment kta(const RealMatrix& k, const RealMatrix& y) {
  if (k.rows() != y.rows() || k.cols() != y.cols()) {
    throw PreconditionError("kta: kernel and target shapes differ");
  }
  const double kn = k.norm();
  const double yn = y.norm();
  if (kn == 0.0 || yn == 0.0) {
    throw DegenerateInputError("kta: zero Frobenius norm in kernel or target");
  }
  // Tr(KY) = Σ K_ij Y_ji
  const double inner = k.cwiseProduct(y.transpose()).sum();
  Alignment a;
  a.alignment = inner / (kn * yn);
  a.loss = 1.0 - a.alignment;
  return a;
}

Alignment kta(const KernelMatrix& k, const TargetKernel& y) { return kta(k.values, y.values); }

TargetKernel target_kernel(std::span<const int> labels, TargetScheme scheme) {
  if (labels.size() < 2) throw DegenerateInputError("target_kernel: need at least two labels");
  const std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) throw DegenerateInputError("target_kernel: single-class label vector");
  const auto n = static_cast<Eigen::Index>(labels.size());
  TargetKernel t;
  t.values.resize(n, n);
  if (scheme == TargetScheme::Binary) {
    if (classes.size() != 2) {
      throw DegenerateInputError("target_kernel: binary scheme needs exactly two classes");
    }
    const int negative = *classes.begin();
    RealVector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == negative ? -1.0 : 1.0;
    t.values = y * y.transpose();
  } else {
    const double off = -1.0 / static_cast<double>(classes.size() - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        t.values(i, j) =
            labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : off;
      }
    }
  }
  return t;
}

double default_rbf_gamma(const RealMatrix& x) {
  if (x.size() == 0) return 1.0;
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  if (var <= 0.0) return 1.0;
  return 1.0 / (static_cast<double>(x.cols()) * var);
}

KernelMatrix classical_cross_kernel(const RealMatrix& rows, const RealMatrix& cols,
                                    const ClassicalKernel& family) {
  if (rows.cols() != cols.cols()) {
    throw PreconditionError("classical kernel: feature dimensions differ");
  }
  if (!rows.allFinite() || !cols.allFinite()) {
    throw PreconditionError("classical kernel: non-finite feature value");
  }
  KernelMatrix k;
  const RealMatrix dots = rows * cols.transpose();
  if (family.kind == ClassicalKernel::Kind::Linear) {
    k.values = dots;
    k.provenance["family"] = "linear";
  } else {
    // The bandwidth heuristic is taken from the training side (cols).
    const double gamma = family.rbf_gamma > 0.0 ? family.rbf_gamma : default_rbf_gamma(cols);
    const RealVector rn = rows.rowwise().squaredNorm();
    const RealVector cn = cols.rowwise().squaredNorm();
    k.values.resize(rows.rows(), cols.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (Eigen::Index j = 0; j < cols.rows(); ++j) {
        const double d2 = std::max(0.0, rn(i) + cn(j) - 2.0 * dots(i, j));
        k.values(i, j) = std::exp(-gamma * d2);
      }
    }
    std::ostringstream g;
    g << std::setprecision(17) << gamma;
    k.provenance["family"] = "rbf";
    k.provenance["rbf_gamma"] = g.str();
  }
  return k;
}

KernelMatrix classical_kernel(const RealMatrix& x, const ClassicalKernel& family) {
  ClassicalKernel resolved = family;
  if (resolved.kind == ClassicalKernel::Kind::Rbf && resolved.rbf_gamma <= 0.0) {
    resolved.rbf_gamma = default_rbf_gamma(x);
  }
  KernelMatrix k = classical_cross_kernel(x, x, resolved);
  if (resolved.kind == ClassicalKernel::Kind::Rbf) k.values.diagonal().setOnes();
  return k;
}

double spectral_concentration(const RealMatrix& k) {
  if (k.rows() != k.cols() || k.rows() == 0) {
    throw PreconditionError("spectral_concentration: kernel must be square and non-empty");
  }
  const RealMatrix sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym, Eigen::EigenvaluesOnly);
  RealVector lambda = solver.eigenvalues().cwiseMax(0.0);
  const double total = lambda.sum();
  if (!(total > 0.0)) {
    throw DegenerateInputError("spectral_concentration: kernel spectrum sums to zero");
  }
  lambda /= total;
  const auto n = static_cast<double>(k.rows());
  double e = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0.0) e += lambda(i) * std::log(n * lambda(i));
  }
  // Clamp round-off so E stays in [0, log n].
  return std::clamp(e, 0.0, std::log(n));
}

bool KernelDiagnostics::valid_fidelity_kernel(Eigen::Index n) const {
  return symmetry_deviation < Tolerances::kernel_symmetry &&
         diagonal_deviation < Tolerances::kernel_diagonal &&
         min_entry >= -Tolerances::kernel_range && max_entry <= 1.0 + Tolerances::kernel_range &&
         min_eigenvalue >= -Tolerances::kernel_psd_per_sample * static_cast<double>(n);
}

KernelDiagnostics diagnose(const RealMatrix& k) {
  KernelDiagnostics d;
  if (k.size() == 0) return d;
  d.symmetry_deviation = (k - k.transpose()).cwiseAbs().maxCoeff();
  d.diagonal_deviation = (k.diagonal().array() - 1.0).abs().maxCoeff();
  d.min_entry = k.minCoeff();
  d.max_entry = k.maxCoeff();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (k + k.transpose()),
                                                   Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

void save_kernel(const std::filesystem::path& path, const KernelMatrix& k) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
      if (j) out << ',';
      out << k.values(i, j);
    }
    out << '\n';
  }
  std::ofstream meta(path.string() + ".meta");
  if (!meta) throw Error("cannot open " + path.string() + ".meta for writing");
  meta << "rows=" << k.values.rows() << '\n' << "cols=" << k.values.cols() << '\n';
  for (const auto& [key, value] : k.provenance) {
    if (key == "rows" || key == "cols") continue;
    meta << key << '=' << value << '\n';
  }
}

KernelMatrix load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open kernel file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad value '" + cell +
                         "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  KernelMatrix k;
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  k.values.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) k.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  std::ifstream meta(path.string() + ".meta");
  while (meta && std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    k.provenance[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return k;
}

}  // namespace qgk
