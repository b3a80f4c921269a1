#include <gtest/gtest.h>

#include <sstream>

#include "qgk/complexity.hpp"
#include "qgk/vgg.hpp"

using namespace qgk;

TEST(Cost, ComponentsForPlainGram) {
  const auto c = qgk_cost(2, 10, 4, 2);
  EXPECT_DOUBLE_EQ(c.generator, 16);
  EXPECT_DOUBLE_EQ(c.projection, 10 * 4 * 2);
  EXPECT_DOUBLE_EQ(c.embedding, 10 * 64);
  EXPECT_DOUBLE_EQ(c.gram, 100 * 4);
  EXPECT_DOUBLE_EQ(c.classical, 100 * 4);
  EXPECT_DOUBLE_EQ(c.gamma, 2);
  EXPECT_DOUBLE_EQ(c.total(), 16 + 80 + 640 + 400);
}

TEST(Cost, BenchmarkRows) {
  struct Row {
    const char* name;
    double qgk, classical;
  };
  const Row paper[] = {{"moons", 1.50e5, 6.56e4},
                       {"circles", 1.50e5, 6.56e4},
                       {"bank", 1.92e5, 5.25e5},
                       {"mnist", 1.32e8, 6.43e8},
                       {"cifar10", 3.45e8, 2.52e9}};
  const auto rows = benchmark_costs();
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(rows[i].name, paper[i].name);
    EXPECT_NEAR(rows[i].cost.total() / paper[i].qgk, 1.0, 0.01) << paper[i].name;
    EXPECT_NEAR(rows[i].cost.classical / paper[i].classical, 1.0, 0.01) << paper[i].name;
  }
}

TEST(Breakeven, QuadraticRootAtTwoQubits) {
  const auto b = breakeven_n(2, 1.0, 15);
  ASSERT_TRUE(b.finite);
  // (4 − 15)n² + (225 + 64)n + 16 = 0
  const double expected = (289 + std::sqrt(289.0 * 289.0 + 4 * 11 * 16)) / 22;
  EXPECT_NEAR(b.n_star, expected, 1e-12);
  EXPECT_NEAR(b.n_star, 26.33, 0.01);
  EXPECT_NEAR(b.a * b.n_star * b.n_star + b.b * b.n_star + b.c, 0.0, 1e-8);
}

TEST(Breakeven, NeverWhenQuadraticTermNonNegative) {
  const auto b = breakeven_n(4, 0.1, 10);  // 16 − 1 > 0
  EXPECT_FALSE(b.finite);
  const auto e = efficiency_bound(8, 0.001);
  EXPECT_FALSE(e.breakeven.finite);
  EXPECT_TRUE(std::isinf(e.exact));
  std::ostringstream out;
  write_breakeven_csv(out, {e});
  EXPECT_NE(out.str().find("never"), std::string::npos);
}

TEST(Breakeven, CostsCrossAtRoot) {
  // Below n* the QGK is dearer than n²·d, above it cheaper.
  for (int eta = 2; eta <= 6; ++eta) {
    const double g = static_cast<double>(group_count(eta, Scaling::Exponential));
    const auto b = breakeven_n(eta, 1.0, g);
    ASSERT_TRUE(b.finite);
    const auto below = qgk_cost(eta, 0.9 * b.n_star, g, g);
    const auto above = qgk_cost(eta, 1.1 * b.n_star, g, g);
    EXPECT_GT(below.total(), below.classical) << eta;
    EXPECT_LT(above.total(), above.classical) << eta;
  }
}

TEST(EfficiencyBound, UncompressedTable) {
  const double paper[] = {1.76, 3.49, 3.75, 7.30, 11.75, 23.26, 43.75};
  for (int eta = 2; eta <= 8; ++eta)
    EXPECT_NEAR(efficiency_bound(eta, 1.0).exact, paper[eta - 2], 0.01) << eta;
}

TEST(EfficiencyBound, CompressedTable) {
  const double paper[] = {0.66, 0.53, 0.38, 0.38, 0.38, 0.46, 0.59};
  for (int eta = 2; eta <= 8; ++eta)
    EXPECT_NEAR(efficiency_bound(eta, eta).exact, paper[eta - 2], 0.01) << eta;
}

TEST(EfficiencyBound, ClosedFormApproximation) {
  for (int eta = 2; eta <= 8; ++eta) {
    const double p4 = std::pow(4.0, eta), p8 = std::pow(8.0, eta);
    EXPECT_NEAR(efficiency_bound(eta, 1.0).approx, 1.5 + std::pow(2.0, eta) / 6, 1e-12);
    const double g = eta;
    EXPECT_NEAR(efficiency_bound(eta, g).approx, (9 * g * p4 + p8) / (3 * g * (3 * g - 1) * p4),
                1e-12);
  }
  EXPECT_NEAR(efficiency_bound(5, 1.0).approx, 6.83, 0.01);
}

TEST(CompressionBound, Values) {
  EXPECT_NEAR(compression_bound(5), 4.0, 1e-12);
  EXPECT_NEAR(compression_bound(2), 2 * std::sqrt(8.0) / 3, 1e-12);
  EXPECT_NEAR(compression_bound(2), 1.886, 1e-3);
  // Just above the bound the approximation drops below one.
  for (int eta = 2; eta <= 8; ++eta)
    EXPECT_LT(efficiency_bound(eta, compression_bound(eta) * 1.01).approx, 1.0);
}
