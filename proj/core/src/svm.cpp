#include "qgk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "qgk/config.hpp"

namespace qgk {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

bool SvmModel::converged() const {
  return std::all_of(machines.begin(), machines.end(),
                     [](const BinaryMachine& m) { return m.converged; });
}

double dual_objective(const RealMatrix& k, std::span<const double> y,
                      std::span<const double> alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  RealVector ay(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ay(i) = alpha[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  double sum_alpha = 0.0;
  for (double a : alpha) sum_alpha += a;
  return sum_alpha - 0.5 * ay.dot(k * ay);
}

BinaryMachine fit_binary(const RealMatrix& k, std::span<const double> y, const SvmConfig& config) {
  const auto n = static_cast<std::size_t>(k.rows());
  const double c = config.c;
  const std::size_t passes = config.max_passes ? config.max_passes : 10 * n;
  const std::size_t max_iter = passes * n;

  auto kij = [&](std::size_t i, std::size_t j) {
    return k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  // Minimization form: ½αᵀQα − eᵀα with Q_ij = y_i y_j K_ij, gradient G = Qα − e.
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  BinaryMachine m;

  auto objective = [&] {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += alpha[i] * (grad[i] - 1.0);
    return -0.5 * value;  // −(½αᵀQα − eᵀα) = −½αᵀ(G − e)
  };
  auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
  };

  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    // i = argmax_{t∈I_up} −y_t G_t, j = argmin_{t∈I_low} −y_t G_t
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    m.max_violation = (i == n || j == n) ? 0.0 : g_max - g_min;
    if (i == n || j == n || g_max - g_min < config.tol) {
      m.converged = true;
      break;
    }

    const double quad = std::max(kij(i, i) + kij(j, j) - 2.0 * kij(i, j), kTau);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    // Move along y_i·d_i = −y_j·d_j; unconstrained optimum then clip to the box.
    double step = (g_max - g_min) / quad;
    auto room_up = [&](std::size_t t) { return y[t] > 0 ? c - alpha[t] : alpha[t]; };
    auto room_down = [&](std::size_t t) { return y[t] > 0 ? alpha[t] : c - alpha[t]; };
    step = std::min({step, room_up(i), room_down(j)});
    alpha[i] += y[i] * step;
    alpha[j] -= y[j] * step;
    alpha[i] = std::clamp(alpha[i], 0.0, c);
    alpha[j] = std::clamp(alpha[j], 0.0, c);

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * kij(t, i) * di + y[j] * kij(t, j) * dj);
    }
    if (config.record_objective) m.objective_history.push_back(objective());
  }
  m.iterations = iter;

  // Bias from free vectors, else the midpoint of the feasible interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] > 0.0 && alpha[t] < c) {
      free_sum += yg;
      ++free_count;
    } else if ((alpha[t] >= c && y[t] < 0) || (alpha[t] <= 0.0 && y[t] > 0)) {
      upper = std::min(upper, yg);
    } else {
      lower = std::max(lower, yg);
    }
  }
  double rho = 0.0;
  if (free_count) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(upper) && std::isfinite(lower)) {
    rho = 0.5 * (upper + lower);
  } else if (std::isfinite(upper)) {
    rho = upper;
  } else if (std::isfinite(lower)) {
    rho = lower;
  }
  m.bias = -rho;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      m.support.push_back(t);
      m.coef.push_back(alpha[t] * y[t]);
    }
  }
  m.dual_objective = objective();
  m.alpha = std::move(alpha);
  return m;
}

SvmModel fit(const RealMatrix& k_train, std::span<const int> labels, const SvmConfig& config) {
  if (k_train.rows() != k_train.cols()) {
    throw PreconditionError("svm fit: kernel must be square");
  }
  if (static_cast<std::size_t>(k_train.rows()) != labels.size() || labels.size() < 2) {
    throw PreconditionError("svm fit: kernel size and label count differ or n < 2");
  }
  if (!(config.c > 0.0) || !(config.tol > 0.0)) {
    throw PreconditionError("svm fit: C and tol must be positive");
  }
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw DegenerateInputError("svm fit: single-class label vector");

  SvmModel model;
  model.c = config.c;
  model.tol = config.tol;
  model.n_train = labels.size();
  model.classes.assign(distinct.begin(), distinct.end());

  std::vector<int> positives;
  if (model.classes.size() == 2) {
    positives.push_back(model.classes[1]);
  } else {
    positives = model.classes;
  }
  std::vector<double> y(labels.size());
  for (int positive : positives) {
    for (std::size_t t = 0; t < labels.size(); ++t) y[t] = labels[t] == positive ? 1.0 : -1.0;
    BinaryMachine m = fit_binary(k_train, y, config);
    m.positive_class = positive;
    model.machines.push_back(std::move(m));
  }
  return model;
}

RealMatrix decision_values(const SvmModel& model, const RealMatrix& k_test_train) {
  if (static_cast<std::size_t>(k_test_train.cols()) != model.n_train) {
    throw PreconditionError("svm predict: kernel block has " +
                            std::to_string(k_test_train.cols()) + " columns, model was trained on " +
                            std::to_string(model.n_train) + " samples");
  }
  RealMatrix f(k_test_train.rows(), static_cast<Eigen::Index>(model.machines.size()));
  for (std::size_t mi = 0; mi < model.machines.size(); ++mi) {
    const auto& m = model.machines[mi];
    for (Eigen::Index r = 0; r < k_test_train.rows(); ++r) {
      double v = m.bias;
      for (std::size_t s = 0; s < m.support.size(); ++s) {
        v += m.coef[s] * k_test_train(r, static_cast<Eigen::Index>(m.support[s]));
      }
      f(r, static_cast<Eigen::Index>(mi)) = v;
    }
  }
  return f;
}

std::vector<int> predict(const SvmModel& model, const RealMatrix& k_test_train) {
  const RealMatrix f = decision_values(model, k_test_train);
  std::vector<int> out(static_cast<std::size_t>(f.rows()));
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    if (model.classes.size() == 2) {
      out[static_cast<std::size_t>(r)] = f(r, 0) > 0.0 ? model.classes[1] : model.classes[0];
    } else {
      Eigen::Index best = 0;
      for (Eigen::Index c = 1; c < f.cols(); ++c) {
        if (f(r, c) > f(r, best)) best = c;
      }
      out[static_cast<std::size_t>(r)] = model.classes[static_cast<std::size_t>(best)];
    }
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw PreconditionError("accuracy: size mismatch or empty input");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

void save_model(const std::filesystem::path& path, const SvmModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  out << "C " << model.c << '\n' << "tol " << model.tol << '\n';
  out << "n_train " << model.n_train << '\n' << "classes";
  for (int c : model.classes) out << ' ' << c;
  out << '\n' << "machines " << model.machines.size() << '\n';
  for (const auto& m : model.machines) {
    out << "machine " << m.positive_class << ' ' << m.bias << ' ' << m.support.size() << '\n';
    for (std::size_t s = 0; s < m.support.size(); ++s) {
      out << m.support[s] << ' ' << m.coef[s] << '\n';
    }
  }
}

SvmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open SVM model " + path.string());
  SvmModel model;
  std::string key;
  std::size_t machines = 0;
  auto expect = [&](const char* k) {
    if (!(in >> key) || key != k) {
      throw ParseError(path.string() + ": expected '" + k + "'");
    }
  };
  expect("C");
  in >> model.c;
  expect("tol");
  in >> model.tol;
  expect("n_train");
  in >> model.n_train;
  expect("classes");
  std::string line;
  std::getline(in, line);
  std::istringstream cls(line);
  for (int c; cls >> c;) model.classes.push_back(c);
  expect("machines");
  in >> machines;
  for (std::size_t mi = 0; mi < machines; ++mi) {
    expect("machine");
    BinaryMachine m;
    std::size_t count = 0;
    if (!(in >> m.positive_class >> m.bias >> count)) throw ParseError(path.string() + ": bad machine");
    for (std::size_t s = 0; s < count; ++s) {
      std::size_t idx = 0;
      double coef = 0.0;
      if (!(in >> idx >> coef)) throw ParseError(path.string() + ": truncated support list");
      m.support.push_back(idx);
      m.coef.push_back(coef);
    }
    m.converged = true;
    model.machines.push_back(std::move(m));
  }
  return model;
}

}  // namespace qgk
