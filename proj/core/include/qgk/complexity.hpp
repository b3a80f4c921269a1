#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qgk {

/// Abstract operation counts of the classical QGK pipeline.
///
/// `pairs` is the number of kernel entries evaluated. It equals n² for a
/// single n×n gram; benchmark rows with a held-out split use n_tr² + n_te².
struct CostModel {
  int eta = 0;
  double n = 0.0;
  double d = 0.0;
  double g = 0.0;
  double gamma = 0.0;
  double pairs = 0.0;
  double generator = 0.0;   // 4^η
  double projection = 0.0;  // n·γ·g²
  double embedding = 0.0;   // n·8^η
  double gram = 0.0;        // pairs·2^η
  double classical = 0.0;   // pairs·d

  [[nodiscard]] double total() const { return generator + projection + embedding + gram; }
};

[[nodiscard]] CostModel qgk_cost(int eta, double n, double d, double g, double test_fraction = 0.0);

struct Breakeven {
  bool finite = false;  // false: the QGK never undercuts n²·d
  double n_star = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Smallest n with (2^η − γg)n² + (γg² + 8^η)n + 4^η < 0.
[[nodiscard]] Breakeven breakeven_n(int eta, double gamma, double g);

struct EfficiencyBound {
  int eta = 0;
  double gamma = 0.0;
  std::size_t g = 0;
  Breakeven breakeven;
  double exact = 0.0;   // n*/d, d = γg
  double approx = 0.0;  // (9γ4^η + 8^η) / (3γ(3γ − 1)4^η)
};

[[nodiscard]] EfficiencyBound efficiency_bound(int eta, double gamma);

// Smallest γ that keeps εb_γ below one: 2√(4 + 2^η)/3.
[[nodiscard]] double compression_bound(int eta);

struct BenchmarkCost {
  std::string name;
  CostModel cost;
};

// Cost rows of the benchmark suite with a 90/10 split.
[[nodiscard]] std::vector<BenchmarkCost> benchmark_costs();

// CSV columns eta,gamma,g,n_star,eb_exact,eb_approx. Infinite rows print "never".
void write_breakeven_csv(std::ostream& out, const std::vector<EfficiencyBound>& rows);
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkCost>& rows);

}  // namespace qgk
