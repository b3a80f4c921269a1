#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qgk/config.hpp"
#include "qgk/vgg.hpp"

using namespace qgk;

TEST(GroupCount, ExponentialTable) {
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {
      {15, 1}, {21, 3}, {51, 5}, {93, 11}, {195, 21}, {381, 43}, {771, 85}};
  for (int eta = 2; eta <= 8; ++eta) {
    const auto [g, gamma] = expected[static_cast<std::size_t>(eta - 2)];
    EXPECT_EQ(group_count(eta, Scaling::Exponential), g) << "eta=" << eta;
    EXPECT_EQ(generators_per_group(eta), gamma) << "eta=" << eta;
    EXPECT_EQ(g * gamma, generator_count(eta));
  }
}

TEST(GroupCount, OtherScalings) {
  EXPECT_EQ(group_count(3, Scaling::Linear), 3u);
  EXPECT_EQ(group_count(3, Scaling::Quadratic), 9u);
  EXPECT_EQ(group_count(3, Scaling::All), 63u);
  EXPECT_EQ(group_count(3, Scaling::Explicit, 7), 7u);
  EXPECT_THROW((void)group_count(3, Scaling::Explicit, 0), ConfigurationError);
  EXPECT_THROW((void)group_count(3, Scaling::Explicit, 64), ConfigurationError);
}

TEST(StridePermutation, WidthZeroIsIdentity) {
  const auto p = stride_permutation(63, 21, 0.0, 3);
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_EQ(p[k], k);
}

TEST(StridePermutation, FallbackStrideEtaThree) {
  const auto p = stride_permutation(63, 21, 3.0, 3);
  ASSERT_EQ(p.size(), 63u);
  for (std::size_t k = 0; k < 63; ++k) EXPECT_EQ(p[k], (16 * k) % 63);
  EXPECT_TRUE(is_permutation(p));
}

TEST(StridePermutation, AlwaysBijective) {
  for (int eta = 1; eta <= 5; ++eta) {
    const std::size_t total = generator_count(eta);
    for (Scaling s : {Scaling::Linear, Scaling::Quadratic, Scaling::Exponential, Scaling::All}) {
      const std::size_t g = group_count(eta, s);
      for (double w : {0.0, 0.5, 1.0, static_cast<double>(eta)}) {
        const auto p = stride_permutation(total, g, w, eta);
        std::set<std::size_t> seen(p.begin(), p.end());
        EXPECT_EQ(seen.size(), total);
        EXPECT_EQ(*seen.rbegin(), total - 1);
      }
    }
  }
}

TEST(StridePermutation, WidthOutOfRangeThrows) {
  EXPECT_THROW((void)stride_permutation(15, 15, 3.0, 2), ConfigurationError);
  EXPECT_THROW((void)stride_permutation(15, 15, -1.0, 2), ConfigurationError);
}

TEST(Interleave, RoundRobinSkippingExhaustedFamilies) {
  const auto gs = build_generator_set(1);
  EXPECT_EQ(interleaved_order(gs), (std::vector<std::size_t>{0, 1, 2}));
  const auto two = build_generator_set(2);
  const auto order = interleaved_order(two);
  // S0 A0 D0 S1 A1 D1 S2 A2 D2 S3 A3 S4 A4 S5 A5
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 12, 2, 3, 13, 4, 5, 14, 6, 7, 8, 9, 10, 11}));
}

TEST(BuildVgg, EtaThreeNarrowGroupsAreConsecutive) {
  const auto gs = build_generator_set(3);
  GroupingConfig cfg{3, Scaling::Exponential, 0.0, 0};
  const auto vgg = build_vgg_set(gs, cfg);
  const auto order = interleaved_order(gs);
  ASSERT_EQ(vgg.groups(), 21u);
  for (std::size_t i = 0; i < 21; ++i) {
    EXPECT_EQ(vgg.assignment[i],
              (std::vector<std::size_t>{order[3 * i], order[3 * i + 1], order[3 * i + 2]}));
  }
}

TEST(BuildVgg, EtaTwoSingletonGroups) {
  const auto gs = build_generator_set(2);
  for (double w : {0.0, 1.0, 2.0}) {
    const auto vgg = build_vgg_set(gs, {2, Scaling::Exponential, w, 0});
    EXPECT_EQ(vgg.groups(), 15u);
    for (const auto& members : vgg.assignment) EXPECT_EQ(members.size(), 1u);
    EXPECT_TRUE(vgg.is_strict_partition());
  }
}

TEST(BuildVgg, OperatorIsSumOfMembers) {
  const auto gs = build_generator_set(3);
  const auto vgg = build_vgg_set(gs, GroupingConfig::exponential(3));
  for (std::size_t i = 0; i < vgg.groups(); ++i) {
    ComplexMatrix sum = ComplexMatrix::Zero(8, 8);
    for (auto j : vgg.assignment[i]) sum += gs.items[j].dense();
    EXPECT_LT((sum - vgg.operators[i]).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((vgg.operators[i] - vgg.operators[i].adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((vgg.eigs[i].reconstruct() - vgg.operators[i]).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(BuildVgg, LeftoversGoToFirstGroups) {
  EXPECT_EQ(group_sizes(15, 2), (std::vector<std::size_t>{8, 7}));
  EXPECT_EQ(group_sizes(63, 9), (std::vector<std::size_t>(9, 7)));
  EXPECT_EQ(group_sizes(1023, 25).front(), 41u);
  EXPECT_EQ(group_sizes(1023, 25).back(), 40u);
  const auto vgg = build_vgg_set(build_generator_set(2), {2, Scaling::Linear, 2.0, 0});
  EXPECT_EQ(vgg.assignment[0].size(), 8u);
  EXPECT_EQ(vgg.assignment[1].size(), 7u);
  EXPECT_TRUE(vgg.is_strict_partition());
}

TEST(BuildVgg, ExplicitNonDivisorThrows) {
  const auto gs = build_generator_set(2);
  EXPECT_THROW((void)build_vgg_set(gs, {2, Scaling::Explicit, 2.0, 4}), ConfigurationError);
  EXPECT_NO_THROW((void)build_vgg_set(gs, {2, Scaling::Explicit, 2.0, 5}));
}

TEST(BuildVgg, EtaMismatchThrows) {
  EXPECT_THROW((void)build_vgg_set(build_generator_set(2), GroupingConfig::exponential(3)),
               PreconditionError);
}

TEST(Rank, AgreesWithGaussianElimination) {
  const auto gs = build_generator_set(2);
  const auto all = build_vgg_set(gs, {2, Scaling::All, 2.0, 0});
  EXPECT_EQ(grouping_rank(all), 15u);
  EXPECT_EQ(oracle::rank(assignment_matrix(all)), 15u);
  const auto exp3 = build_vgg_set(build_generator_set(3), GroupingConfig::exponential(3));
  EXPECT_EQ(grouping_rank(exp3), 21u);
  EXPECT_EQ(oracle::rank(assignment_matrix(exp3)), 21u);
}

TEST(Rank, DuplicatedColumnLosesOne) {
  const auto vgg = build_vgg_set(build_generator_set(2), GroupingConfig::exponential(2));
  RealMatrix m = assignment_matrix(vgg);
  m.col(3) = m.col(7);
  EXPECT_EQ(matrix_rank(m), 14u);
  EXPECT_EQ(oracle::rank(m), 14u);
}

TEST(Frobenius, SingletonGroupsEtaTwo) {
  const auto vgg = build_vgg_set(build_generator_set(2), GroupingConfig::exponential(2));
  const auto w = frobenius_weights(vgg);
  for (double f : w.squared_norms) EXPECT_NEAR(f, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(w.sums.total_mass, 15.0);
  EXPECT_DOUBLE_EQ(w.sums.balance, 225.0);
  EXPECT_DOUBLE_EQ(w.sums.anisotropy_sum, 15.0);
}

TEST(Frobenius, EtaFiveBalanced) {
  const auto vgg = build_vgg_set(build_generator_set(5), GroupingConfig::exponential(5));
  const auto w = frobenius_weights(vgg);
  for (auto s : w.sizes) EXPECT_EQ(s, 11u);
  for (std::size_t i = 0; i < w.sizes.size(); ++i) EXPECT_NEAR(w.squared_norms[i], 22.0, 1e-9);
  EXPECT_DOUBLE_EQ(w.sums.total_mass, 1023.0);
  EXPECT_NEAR(w.sums.balance, 93.0 * 93.0 * 11.0, 1e-6);
  EXPECT_DOUBLE_EQ(w.sums.anisotropy_sum, 93.0 * 121.0);
}

TEST(Summary, OneLinePerGroup) {
  const auto vgg = build_vgg_set(build_generator_set(1), GroupingConfig::exponential(1));
  std::ostringstream out;
  write_vgg_summary(out, vgg);
  std::string line;
  std::istringstream in(out.str());
  std::getline(in, line);
  EXPECT_EQ(line, "group,size,members,frobenius_sq");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, vgg.groups());
}
