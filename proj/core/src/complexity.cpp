#include "qgk/complexity.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "qgk/config.hpp"
#include "qgk/vgg.hpp"

namespace qgk {

CostModel qgk_cost(int eta, double n, double d, double g, double test_fraction) {
  if (eta < 1 || n < 0.0 || d <= 0.0 || g <= 0.0) {
    throw PreconditionError("qgk_cost: eta ≥ 1, n ≥ 0, d > 0 and g > 0 required");
  }
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw PreconditionError("qgk_cost: test_fraction must lie in [0, 1)");
  }
  const double dim = std::ldexp(1.0, eta);
  CostModel m;
  m.eta = eta;
  m.n = n;
  m.d = d;
  m.g = g;
  m.gamma = d / g;
  const double n_test = std::round(n * test_fraction);
  const double n_train = n - n_test;
  m.pairs = n_train * n_train + n_test * n_test;
  m.generator = dim * dim;
  m.projection = n * m.gamma * g * g;
  m.embedding = n * dim * dim * dim;
  m.gram = m.pairs * dim;
  m.classical = m.pairs * d;
  return m;
}

Breakeven breakeven_n(int eta, double gamma, double g) {
  if (eta < 1 || gamma <= 0.0 || g <= 0.0) {
    throw PreconditionError("breakeven_n: eta ≥ 1, gamma > 0 and g > 0 required");
  }
  const double dim = std::ldexp(1.0, eta);
  Breakeven r;
  r.a = dim - gamma * g;
  r.b = gamma * g * g + dim * dim * dim;
  r.c = dim * dim;
  if (r.a >= 0.0) return r;
  const double disc = r.b * r.b - 4.0 * r.a * r.c;
  r.finite = true;
  r.n_star = (-r.b - std::sqrt(disc)) / (2.0 * r.a);
  return r;
}

EfficiencyBound efficiency_bound(int eta, double gamma) {
  if (eta < 1 || eta > kMaxQubits) throw PreconditionError("efficiency_bound: eta out of range");
  EfficiencyBound e;
  e.eta = eta;
  e.gamma = gamma;
  e.g = group_count(eta, Scaling::Exponential);
  const double g = static_cast<double>(e.g);
  e.breakeven = breakeven_n(eta, gamma, g);
  e.exact = e.breakeven.finite ? e.breakeven.n_star / (gamma * g)
                               : std::numeric_limits<double>::infinity();
  const double four = std::ldexp(1.0, 2 * eta);
  const double eight = std::ldexp(1.0, 3 * eta);
  e.approx = (9.0 * gamma * four + eight) / (3.0 * gamma * (3.0 * gamma - 1.0) * four);
  return e;
}

double compression_bound(int eta) {
  if (eta < 1) throw PreconditionError("compression_bound: eta ≥ 1 required");
  return 2.0 * std::sqrt(4.0 + std::ldexp(1.0, eta)) / 3.0;
}

std::vector<BenchmarkCost> benchmark_costs() {
  struct Row {
    const char* name;
    int eta;
    double d;
    double n;
  };
  static constexpr Row rows[] = {
      {"moons", 2, 2, 200},   {"circles", 2, 2, 200},    {"bank", 2, 16, 200},
      {"mnist", 5, 784, 1000}, {"cifar10", 5, 3072, 1000},
  };
  std::vector<BenchmarkCost> out;
  for (const auto& r : rows) {
    const double g = static_cast<double>(group_count(r.eta, Scaling::Exponential));
    out.push_back({r.name, qgk_cost(r.eta, r.n, r.d, g, 0.1)});
  }
  return out;
}

void write_breakeven_csv(std::ostream& out, const std::vector<EfficiencyBound>& rows) {
  const auto old_precision = out.precision(10);
  out << "eta,gamma,g,n_star,eb_exact,eb_approx\n";
  for (const auto& r : rows) {
    out << r.eta << ',' << r.gamma << ',' << r.g << ',';
    if (r.breakeven.finite) {
      out << r.breakeven.n_star << ',' << r.exact;
    } else {
      out << "never,never";
    }
    out << ',' << r.approx << '\n';
  }
  out.precision(old_precision);
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkCost>& rows) {
  const auto old_precision = out.precision(6);
  out << "dataset,eta,d,n,g,qgk_cost,classical_cost\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.cost.eta << ',' << r.cost.d << ',' << r.cost.n << ',' << r.cost.g
        << ',' << std::scientific << r.cost.total() << ',' << r.cost.classical
        << std::defaultfloat << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qgk
