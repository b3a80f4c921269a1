#include "qgk/projection.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "qgk/config.hpp"
#include "qgk/random.hpp"

namespace qgk {

const char* to_string(InitScheme s) {
  switch (s) {
    case InitScheme::ScaledUniform:
      return "scaled_uniform";
    case InitScheme::FanScaled:
      return "fan_scaled";
    case InitScheme::IdentityLike:
      return "identity_like";
  }
  return "?";
}

InitScheme parse_init_scheme(const std::string& name) {
  if (name == "scaled_uniform") return InitScheme::ScaledUniform;
  if (name == "fan_scaled") return InitScheme::FanScaled;
  if (name == "identity_like") return InitScheme::IdentityLike;
  throw ConfigurationError("unknown init scheme '" + name + "'");
}

ProjectionParams init_params(Eigen::Index d, Eigen::Index g, std::uint64_t seed,
                             InitScheme scheme) {
  if (d <= 0 || g <= 0) throw PreconditionError("init_params: d and g must be positive");
  ProjectionParams p;
  p.bias = RealVector::Zero(g);
  if (scheme == InitScheme::IdentityLike) {
    if (d != g) {
      throw PreconditionError("init_params: identity-like init needs d == g (d=" +
                              std::to_string(d) + ", g=" + std::to_string(g) + ")");
    }
    p.weights = std::numbers::pi * RealMatrix::Identity(g, d);
    return p;
  }
  const double bound = scheme == InitScheme::FanScaled
                           ? std::sqrt(3.0 / static_cast<double>(d * g))
                           : std::sqrt(6.0 / static_cast<double>(d + g));
  CounterRng rng(seed, 0x1417);
  p.weights.resize(g, d);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) p.weights(i, k) = rng.uniform(-bound, bound);
  }
  return p;
}

RealMatrix project(const ProjectionParams& params, const RealMatrix& x) {
  if (x.cols() != params.features()) {
    throw PreconditionError("project: input has " + std::to_string(x.cols()) +
                            " features, projection expects " +
                            std::to_string(params.features()));
  }
  if (params.bias.size() != params.groups()) {
    throw PreconditionError("project: bias length does not match W rows");
  }
  RealMatrix phi = x * params.weights.transpose();
  phi.rowwise() += params.bias.transpose();
  return phi;
}

std::vector<StateVector> embed_rows(const VggSet& vgg, const RealMatrix& phi,
                                    const EmbeddingConfig& config) {
  std::vector<StateVector> states;
  states.reserve(static_cast<std::size_t>(phi.rows()));
  std::vector<double> row(static_cast<std::size_t>(phi.cols()));
  for (Eigen::Index a = 0; a < phi.rows(); ++a) {
    for (Eigen::Index i = 0; i < phi.cols(); ++i) row[static_cast<std::size_t>(i)] = phi(a, i);
    states.push_back(embed(vgg, row, config).psi);
  }
  return states;
}

Alignment kta_of(const ProjectionParams& params, const RealMatrix& x, std::span<const int> labels,
                 const VggSet& vgg, const EmbeddingConfig& config, TargetScheme target) {
  const auto states = embed_rows(vgg, project(params, x), config);
  return kta(gram(states), target_kernel(labels, target));
}

namespace {

void check_inputs(const ProjectionParams& params, const RealMatrix& x,
                  std::span<const int> labels, const VggSet& vgg) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw PreconditionError("kta_gradient: " + std::to_string(x.rows()) + " samples but " +
                            std::to_string(labels.size()) + " labels");
  }
  if (static_cast<std::size_t>(params.groups()) != vgg.groups()) {
    throw PreconditionError("kta_gradient: projection has " + std::to_string(params.groups()) +
                            " outputs but the grouping has " + std::to_string(vgg.groups()) +
                            " groups");
  }
}

KtaGradient analytic_gradient(const ProjectionParams& params, const RealMatrix& x,
                              std::span<const int> labels, const VggSet& vgg,
                              const EmbeddingConfig& config, TargetScheme target) {
  if (config.mode != EmbeddingMode::Product) {
    throw UnsupportedModeError("kta_gradient: analytic mode requires the product embedding");
  }
  const RealMatrix y = target_kernel(labels, target).values;
  const RealMatrix phi = project(params, x);
  const auto states = embed_rows(vgg, phi, config);
  const ComplexMatrix s = stack_states(states);
  const ComplexMatrix overlaps = s * s.adjoint();  // (a, b) = ⟨ψ_b|ψ_a⟩
  RealMatrix k = overlaps.cwiseAbs2();
  k.diagonal().setOnes();

  const double kn = k.norm();
  const double yn = y.norm();
  if (kn == 0.0 || yn == 0.0) throw DegenerateInputError("kta_gradient: zero-norm kernel");
  const double inner = k.cwiseProduct(y).sum();

  KtaGradient out;
  out.alignment = inner / (kn * yn);
  out.loss = 1.0 - out.alignment;

  // ∂L/∂K_ab; the diagonal is constant and drops out.
  RealMatrix dl_dk = -(y / (kn * yn) - (inner / (kn * kn * kn * yn)) * k);
  dl_dk.diagonal().setZero();

  // χ_a = Σ_b (∂L/∂K)_ab·⟨ψ_b|ψ_a⟩·ψ_b, so ∂L/∂φ^(a)_i = 4·Re⟨χ_a|∂ψ_a/∂φ_i⟩.
  const ComplexMatrix weighted = dl_dk.cast<Complex>().cwiseProduct(overlaps);
  const ComplexMatrix chi = weighted * s;

  const Eigen::Index n = x.rows();
  const Eigen::Index g = params.groups();
  RealMatrix dphi(n, g);
  std::vector<double> row(static_cast<std::size_t>(g));
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index i = 0; i < g; ++i) row[static_cast<std::size_t>(i)] = phi(a, i);
    const StateVector chi_a = chi.row(a).transpose();
    const Eigen::VectorXcd vjp =
        embed_vjp(vgg, row, states[static_cast<std::size_t>(a)], chi_a);
    dphi.row(a) = 4.0 * vjp.real().transpose();
  }
  out.d_weights = dphi.transpose() * x;
  out.d_bias = dphi.colwise().sum().transpose();
  return out;
}

KtaGradient finite_difference_gradient(const ProjectionParams& params, const RealMatrix& x,
                                       std::span<const int> labels, const VggSet& vgg,
                                       const EmbeddingConfig& config, TargetScheme target,
                                       double step) {
  KtaGradient out;
  const Alignment base = kta_of(params, x, labels, vgg, config, target);
  out.loss = base.loss;
  out.alignment = base.alignment;
  out.d_weights.resize(params.groups(), params.features());
  out.d_bias.resize(params.groups());
  ProjectionParams probe = params;
  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + step;
    const double up = kta_of(probe, x, labels, vgg, config, target).loss;
    slot = saved - step;
    const double down = kta_of(probe, x, labels, vgg, config, target).loss;
    slot = saved;
    return (up - down) / (2.0 * step);
  };
  for (Eigen::Index i = 0; i < params.groups(); ++i) {
    for (Eigen::Index k = 0; k < params.features(); ++k) {
      out.d_weights(i, k) = central(probe.weights(i, k));
    }
    out.d_bias(i) = central(probe.bias(i));
  }
  return out;
}

}  // namespace

KtaGradient kta_gradient(const ProjectionParams& params, const RealMatrix& x,
                         std::span<const int> labels, const VggSet& vgg,
                         const EmbeddingConfig& config, const GradientOptions& options) {
  check_inputs(params, x, labels, vgg);
  if (options.mode == GradientMode::Analytic) {
    return analytic_gradient(params, x, labels, vgg, config, options.target);
  }
  return finite_difference_gradient(params, x, labels, vgg, config, options.target,
                                    options.fd_step);
}

double default_learning_rate(int eta) { return std::pow(10.0, -(eta - 1)); }

namespace {

struct AdamState {
  RealMatrix m_w, v_w;
  RealVector m_b, v_b;
  std::size_t step = 0;
};

void adam_update(ProjectionParams& p, AdamState& st, const KtaGradient& grad, double lr,
                 const TrainConfig& cfg) {
  ++st.step;
  const double t = static_cast<double>(st.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  st.m_w = cfg.beta1 * st.m_w + (1.0 - cfg.beta1) * grad.d_weights;
  st.v_w = cfg.beta2 * st.v_w + (1.0 - cfg.beta2) * grad.d_weights.cwiseAbs2();
  st.m_b = cfg.beta1 * st.m_b + (1.0 - cfg.beta1) * grad.d_bias;
  st.v_b = cfg.beta2 * st.v_b + (1.0 - cfg.beta2) * grad.d_bias.cwiseAbs2();
  p.weights.array() -=
      lr * (st.m_w.array() / c1) / ((st.v_w.array() / c2).sqrt() + cfg.epsilon);
  p.bias.array() -= lr * (st.m_b.array() / c1) / ((st.v_b.array() / c2).sqrt() + cfg.epsilon);
}

template <typename Rows>
RealMatrix gather_rows(const RealMatrix& x, const Rows& rows) {
  RealMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

}  // namespace

TrainResult train(const ProjectionParams& initial, const RealMatrix& x,
                  std::span<const int> labels, const VggSet& vgg,
                  const EmbeddingConfig& embed_config, const TrainConfig& config) {
  if (config.epochs < 1) throw PreconditionError("train: epochs must be at least 1");
  if (x.rows() < 2) throw DegenerateInputError("train: need at least two samples");
  if (std::set<int>(labels.begin(), labels.end()).size() < 2) {
    throw DegenerateInputError("train: single-class label vector");
  }
  const double lr =
      config.learning_rate > 0.0 ? config.learning_rate : default_learning_rate(vgg.eta());
  const auto n = static_cast<std::size_t>(x.rows());
  std::size_t batch = config.batch_size;
  if (batch == 0) batch = n <= 512 ? n : 256;
  batch = std::min(batch, n);

  TrainResult result;
  result.params = initial;
  AdamState st{RealMatrix::Zero(initial.groups(), initial.features()),
               RealMatrix::Zero(initial.groups(), initial.features()),
               RealVector::Zero(initial.groups()), RealVector::Zero(initial.groups())};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(config.seed, 0xBA7C);
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch < n) rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    double align_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t end = std::min(n, begin + batch);
      KtaGradient grad;
      if (batch == n) {
        grad = kta_gradient(result.params, x, labels, vgg, embed_config, config.gradient);
      } else {
        std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                      order.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<int> sub_labels;
        for (std::size_t r : rows) sub_labels.push_back(labels[r]);
        // A batch with a single class has no defined target alignment.
        if (std::set<int>(sub_labels.begin(), sub_labels.end()).size() < 2) continue;
        grad = kta_gradient(result.params, gather_rows(x, rows), sub_labels, vgg, embed_config,
                            config.gradient);
      }
      if (!std::isfinite(grad.loss) || !grad.d_weights.allFinite() || !grad.d_bias.allFinite()) {
        throw NumericalError("train: non-finite KTA loss or gradient at epoch " +
                             std::to_string(epoch) + " (loss=" + std::to_string(grad.loss) +
                             ")");
      }
      loss_sum += grad.loss;
      align_sum += grad.alignment;
      ++batches;
      adam_update(result.params, st, grad, lr, config);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double denom = static_cast<double>(std::max<std::size_t>(batches, 1));
    result.trace.records.push_back({epoch, loss_sum / denom, align_sum / denom, elapsed});
  }
  result.initial_alignment = result.trace.records.front().alignment;
  const Alignment final_eval =
      kta_of(result.params, x, labels, vgg, embed_config, config.gradient.target);
  result.final_alignment = final_eval.alignment;
  result.final_loss = final_eval.loss;
  return result;
}

void write_trace_csv(std::ostream& out, const TrainTrace& trace, bool include_seconds) {
  const auto old_precision = out.precision(17);
  out << "epoch,loss,alignment,seconds\n";
  for (const auto& r : trace.records) {
    out << r.epoch << ',' << r.loss << ',' << r.alignment << ',';
    if (include_seconds) {
      out << std::setprecision(6) << r.seconds << std::setprecision(17);
    } else {
      out << 0;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const auto& p = ckpt.params;
  out << std::setprecision(17);
  out << p.features() << ' ' << p.groups() << ' ' << ckpt.seed << ' ' << ckpt.epoch << '\n';
  for (Eigen::Index i = 0; i < p.groups(); ++i) {
    for (Eigen::Index k = 0; k < p.features(); ++k) {
      if (k) out << ' ';
      out << p.weights(i, k);
    }
    out << '\n';
  }
  for (Eigen::Index i = 0; i < p.groups(); ++i) {
    if (i) out << ' ';
    out << p.bias(i);
  }
  out << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint " + path.string());
  Checkpoint c;
  Eigen::Index d = 0;
  Eigen::Index g = 0;
  if (!(in >> d >> g >> c.seed >> c.epoch) || d <= 0 || g <= 0) {
    throw ParseError(path.string() + ": malformed checkpoint header");
  }
  c.params.weights.resize(g, d);
  c.params.bias.resize(g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (!(in >> c.params.weights(i, k))) throw ParseError(path.string() + ": truncated W");
    }
  }
  for (Eigen::Index i = 0; i < g; ++i) {
    if (!(in >> c.params.bias(i))) throw ParseError(path.string() + ": truncated b");
  }
  return c;
}

}  // namespace qgk
