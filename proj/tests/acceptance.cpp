// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "qgk/complexity.hpp"
#include "qgk/experiment.hpp"
#include "qgk/metrics.hpp"

using namespace qgk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

fs::path work_root() {
  const auto dir = fs::temp_directory_path() / "qgk-acceptance";
  fs::create_directories(dir);
  return dir;
}

// Generator algebra, η = 1..4.
Outcome generator_algebra() {
  bool ok = true;
  std::ostringstream d;
  for (int eta = 1; eta <= 4; ++eta) {
    const auto gs = build_generator_set(eta);
    const auto r = verify_basis(gs);
    const bool tight = r.count == (std::size_t{1} << (2 * eta)) - 1 &&
                       r.max_hermiticity_deviation < 1e-12 && r.max_trace_deviation < 1e-12 &&
                       r.max_orthogonality_deviation < 1e-10;
    ok = ok && r.all_pass() && tight;
    d << "eta" << eta << " orth=" << fmt(r.max_orthogonality_deviation, 2) << " ";
  }
  const auto one = build_generator_set(1);
  const char paulis[] = {'X', 'Y', 'Z'};
  for (std::size_t i = 0; i < 3; ++i) ok = ok && one.items[i].dense() == oracle::pauli(paulis[i]);
  d << "pauli=" << (ok ? "exact" : "?");
  return {ok, d.str()};
}

// Grouping tables and structure over every scaling and width.
Outcome grouping_tables() {
  const std::size_t expected[][3] = {{2, 15, 1}, {3, 21, 3}, {4, 51, 5}, {5, 93, 11}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& row : expected) {
    const int eta = static_cast<int>(row[0]);
    ok = ok && group_count(eta, Scaling::Exponential) == row[1] && generators_per_group(eta) == row[2];
  }
  d << "table=" << (ok ? "exact" : "mismatch");
  std::size_t combos = 0;
  double worst = 0;
  for (int eta = 2; eta <= 5; ++eta) {
    const auto gs = build_generator_set(eta);
    for (auto scaling : {Scaling::Linear, Scaling::Quadratic, Scaling::Exponential, Scaling::All}) {
      for (double w : {0.0, 1.0, static_cast<double>(eta) / 2, static_cast<double>(eta)}) {
        const auto vgg = build_vgg_set(gs, {eta, scaling, w, 0});
        ok = ok && vgg.is_strict_partition() && is_permutation(vgg.permutation) &&
             grouping_rank(vgg) == vgg.groups();
        const auto fw = frobenius_weights(vgg);
        for (std::size_t i = 0; i < fw.sizes.size(); ++i)
          worst = std::max(worst, std::abs(fw.squared_norms[i] - 2.0 * static_cast<double>(fw.sizes[i])));
        ++combos;
      }
    }
  }
  ok = ok && worst < 1e-9;
  d << " combos=" << combos << " frob_dev=" << fmt(worst, 2);
  return {ok, d.str()};
}

// Unitarity and gradients of the embedding.
Outcome embedding_correctness() {
  CounterRng rng(0xACC3);
  double worst_unitary = 0;
  for (int t = 0; t < 100; ++t) {
    const int eta = 1 + static_cast<int>(rng.below(4));
    const auto vgg = build_vgg_set(build_generator_set(eta), GroupingConfig::exponential(eta));
    std::vector<double> phi(vgg.groups());
    for (auto& v : phi) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const auto mode = t % 2 ? EmbeddingMode::SumExp : EmbeddingMode::Product;
    worst_unitary = std::max(worst_unitary, unitarity_check(vgg, phi, {mode}));
  }
  double worst_grad = 0;
  for (int t = 0; t < 20; ++t) {
    const int eta = 2 + t % 2;
    const auto vgg = build_vgg_set(build_generator_set(eta), GroupingConfig::exponential(eta));
    const auto g = static_cast<Eigen::Index>(vgg.groups());
    RealMatrix x(6, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    const int labels[] = {0, 1, 0, 1, 1, 0};
    auto p = init_params(2, g, 100 + static_cast<std::uint64_t>(t));
    for (Eigen::Index i = 0; i < g; ++i) p.bias(i) = 0.5 * rng.normal();
    const auto a = kta_gradient(p, x, labels, vgg, {}, {GradientMode::Analytic});
    const auto f = kta_gradient(p, x, labels, vgg, {}, {GradientMode::FiniteDifference});
    RealVector av(a.d_weights.size() + a.d_bias.size()), fv(av.size());
    av << a.d_weights.reshaped(), a.d_bias;
    fv << f.d_weights.reshaped(), f.d_bias;
    worst_grad = std::max(worst_grad, (av - fv).norm() / fv.norm());
  }
  return {worst_unitary < 1e-9 && worst_grad < 1e-4,
          "unitarity=" + fmt(worst_unitary, 2) + " grad_rel=" + fmt(worst_grad, 2)};
}

// Gram matrix invariants on random batches.
Outcome kernel_properties() {
  CounterRng rng(0xACC4);
  bool ok = true;
  double worst_naive = 0, worst_self = 0, worst_scale = 0;
  for (int t = 0; t < 50; ++t) {
    const int eta = 1 + static_cast<int>(rng.below(3));
    const auto vgg = build_vgg_set(build_generator_set(eta), GroupingConfig::exponential(eta));
    const auto n = 2 + static_cast<std::size_t>(rng.below(15));
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> phi(vgg.groups());
      for (auto& v : phi) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
      states.push_back(embed(vgg, phi, {}).psi);
    }
    const auto k = gram(states).values;
    ok = ok && diagnose(k).valid_fidelity_kernel(k.rows());
    worst_naive = std::max(worst_naive, (k - oracle::naive_gram(states, states)).cwiseAbs().maxCoeff());
    worst_self = std::max(worst_self, std::abs(kta(k, k).alignment - 1.0));
    RealMatrix y = RealMatrix::Identity(k.rows(), k.cols());
    y(0, k.cols() - 1) = y(k.cols() - 1, 0) = -0.5;
    worst_scale = std::max(worst_scale, std::abs(kta(2.5 * k, y).alignment - kta(k, y).alignment));
  }
  ok = ok && worst_naive < 1e-12 && worst_self < 1e-12 && worst_scale < 1e-12;
  return {ok, "naive=" + fmt(worst_naive, 2) + " kta_self=" + fmt(worst_self, 2) +
                  " scale=" + fmt(worst_scale, 2)};
}

// Efficiency-bound tables and benchmark cost rows.
Outcome complexity_tables() {
  const double eb1[] = {1.76, 3.49, 3.75, 7.30, 11.75, 23.26, 43.75};
  const double ebeta[] = {0.66, 0.53, 0.38, 0.38, 0.38, 0.46, 0.59};
  double worst_eb = 0;
  for (int eta = 2; eta <= 8; ++eta) {
    worst_eb = std::max(worst_eb, std::abs(efficiency_bound(eta, 1.0).exact - eb1[eta - 2]));
    worst_eb = std::max(worst_eb, std::abs(efficiency_bound(eta, eta).exact - ebeta[eta - 2]));
  }
  const double qgk[] = {1.50e5, 1.50e5, 1.92e5, 1.32e8, 3.45e8};
  const double classical[] = {6.56e4, 6.56e4, 5.25e5, 6.43e8, 2.52e9};
  const auto rows = benchmark_costs();
  double worst_rel = 0;
  for (std::size_t i = 0; i < rows.size() && i < 5; ++i) {
    worst_rel = std::max(worst_rel, std::abs(rows[i].cost.total() / qgk[i] - 1));
    worst_rel = std::max(worst_rel, std::abs(rows[i].cost.classical / classical[i] - 1));
  }
  return {rows.size() == 5 && worst_eb <= 0.01 && worst_rel < 0.01,
          "eb_dev=" + fmt(worst_eb, 3) + " cost_rel=" + fmt(worst_rel, 3)};
}

ExperimentConfig protocol(const std::string& dataset, const std::string& tag) {
  return config_from_map({{"dataset", dataset},
                          {"n", "200"},
                          {"noise", "0.2"},
                          {"eta", "2"},
                          {"epochs", "100"},
                          {"learning_rate", "0.1"},
                          {"seeds", "0..7"},
                          {"output", (work_root() / tag).string()}});
}

const RunResult& moons_run() {
  static const RunResult r = run_experiment(protocol("moons", "moons"));
  return r;
}

struct CirclesRuns {
  RunResult trained, stat, linear;
};

const CirclesRuns& circles_runs() {
  static const CirclesRuns r = [] {
    CirclesRuns out;
    out.trained = run_experiment(protocol("circles", "circles"));
    auto stat = protocol("circles", "circles-static");
    stat.pretrain = false;
    out.stat = run_experiment(stat);
    auto lin = protocol("circles", "circles-linear");
    lin.kernel = KernelFamily::Linear;
    out.linear = run_experiment(lin);
    return out;
  }();
  return r;
}

Outcome moons_end_to_end() {
  const auto& r = moons_run();
  return {r.accuracy.mean >= 0.90 && r.final_alignment.mean >= 0.70,
          "accuracy=" + fmt(r.accuracy.mean) + "±" + fmt(r.accuracy.half_width, 2) +
              " (>=0.90) final_kta=" + fmt(r.final_alignment.mean) + " (>=0.70)"};
}

Outcome circles_end_to_end() {
  const auto& r = circles_runs();
  const double trained = r.trained.accuracy.mean;
  const double linear = r.linear.accuracy.mean;
  const double stat = r.stat.accuracy.mean;
  return {trained >= linear + 0.10 && trained > stat,
          "trained=" + fmt(trained) + " linear=" + fmt(linear) + " static=" + fmt(stat)};
}

Outcome training_improves_alignment() {
  std::size_t improved = 0, total = 0;
  for (const auto* r : {&moons_run(), &circles_runs().trained}) {
    for (const auto& s : r->seeds) {
      ++total;
      if (s.final_alignment > s.initial_alignment) ++improved;
    }
  }
  return {total == 16 && improved == total,
          std::to_string(improved) + "/" + std::to_string(total) + " seeds improved"};
}

Outcome metrics_sanity() {
  bool ok = true;
  StateVector product = StateVector::Zero(8);
  product(3) = 1;
  ok = ok && std::abs(meyer_wallach(product, 3)) < 1e-10;
  StateVector bell = StateVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  ok = ok && std::abs(meyer_wallach(bell, 2) - 1) < 1e-10;
  StateVector ghz = StateVector::Zero(16);
  ghz(0) = ghz(15) = 1 / std::sqrt(2.0);
  ok = ok && std::abs(meyer_wallach(ghz, 4) - 1) < 1e-10;
  double lo = 1e9, hi = -1e9;
  const std::size_t n = 32;
  for (int eta = 1; eta <= 3; ++eta) {
    const auto vgg = build_vgg_set(build_generator_set(eta), GroupingConfig::exponential(eta));
    const double e = expressibility(vgg, {}, n, 1);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  ok = ok && lo >= 0 && hi <= std::log(static_cast<double>(n));
  const auto vgg1 = build_vgg_set(build_generator_set(1), GroupingConfig::exponential(1));
  const double q1 = entanglement_capability(vgg1, {}, 200, 2).max;
  ok = ok && q1 < 1e-10;
  return {ok, "E(K) in [" + fmt(lo) + ", " + fmt(hi) + "] eta1_maxQ=" + fmt(q1, 2)};
}

// 500 × 42 three-class CSV with string labels, compressed onto g = 21 groups.
Outcome compression_pipeline() {
  const auto path = work_root() / "subset.csv";
  {
    CounterRng rng(0xC5F);
    const int n = 500, d = 42, classes = 3;
    RealMatrix means(classes, d);
    for (Eigen::Index i = 0; i < means.size(); ++i) means(i) = 0.35 * rng.normal();
    std::ofstream out(path);
    out.precision(17);
    for (int j = 0; j < d; ++j) out << "x" << j << ",";
    out << "class\n";
    for (int i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(rng.below(classes));
      for (int j = 0; j < d; ++j) out << means(c, j) + rng.normal() << ",";
      out << "type-" << char('a' + c) << "\n";
    }
  }
  auto cfg = config_from_map({{"dataset", "csv"},
                              {"csv", path.string()},
                              {"label_column", "class"},
                              {"eta", "3"},
                              {"init", "fan_scaled"},
                              {"seeds", "0..7"},
                              {"output", (work_root() / "subset").string()}});
  const auto r = run_experiment(cfg);
  double majority = 0;
  for (const auto& s : r.seeds) majority += s.majority_rate;
  majority /= static_cast<double>(r.seeds.size());
  const auto& s0 = r.seeds.front();
  const double gamma = static_cast<double>(s0.features) / static_cast<double>(s0.groups);
  return {r.accuracy.mean > majority && gamma > 1,
          "accuracy=" + fmt(r.accuracy.mean) + " majority=" + fmt(majority) + " d=" +
              std::to_string(s0.features) + " g=" + std::to_string(s0.groups) + " gamma=" + fmt(gamma)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "generator algebra", 10, generator_algebra},
      {2, "grouping tables", 60, grouping_tables},
      {3, "embedding correctness", 120, embedding_correctness},
      {4, "kernel properties", 1e9, kernel_properties},
      {5, "complexity tables", 1, complexity_tables},
      {6, "moons end-to-end", 600, moons_end_to_end},
      {7, "circles end-to-end", 600, circles_end_to_end},
      {8, "training improves alignment", 1e9, training_improves_alignment},
      {9, "metrics sanity", 1e9, metrics_sanity},
      {10, "compression pipeline", 1e9, compression_pipeline},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %-28s %s  %s  [%.2fs%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
