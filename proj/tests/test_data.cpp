#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgk/config.hpp"
#include "qgk/data.hpp"

using namespace qgk;
namespace fs = std::filesystem;

namespace {

fs::path write_text(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Moons, NoiselessGeometry) {
  const auto ds = make_moons(100, 0.0, 1);
  ASSERT_EQ(ds.size(), 100u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (ds.y[i] == 0) {
      EXPECT_NEAR(ds.x(r, 0) * ds.x(r, 0) + ds.x(r, 1) * ds.x(r, 1), 1.0, 1e-12);
      EXPECT_GE(ds.x(r, 1), -1e-12);
    } else {
      const double a = 1 - ds.x(r, 0), b = 0.5 - ds.x(r, 1);
      EXPECT_NEAR(a * a + b * b, 1.0, 1e-12);
    }
  }
}

TEST(Moons, BalanceAndDeterminism) {
  const auto a = make_moons(200, 0.2, 7);
  const auto b = make_moons(200, 0.2, 7);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(a.x, make_moons(200, 0.2, 8).x);
  EXPECT_EQ(std::count(a.y.begin(), a.y.end(), 1), 100);
  EXPECT_THROW((void)make_moons(3, 0.1, 0), PreconditionError);
}

TEST(Circles, Radii) {
  const auto ds = make_circles(40, 0.0, 2, 0.5);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = ds.x.row(static_cast<Eigen::Index>(i)).norm();
    EXPECT_NEAR(r, ds.y[i] == 0 ? 1.0 : 0.5, 1e-12);
  }
  EXPECT_EQ(std::count(ds.y.begin(), ds.y.end(), 0), 20);
  EXPECT_THROW((void)make_circles(40, 0.0, 2, 1.0), PreconditionError);
}

TEST(Csv, RoundTrip) {
  const auto ds = make_circles(12, 0.1, 3);
  const auto path = fs::temp_directory_path() / "qgk-roundtrip.csv";
  write_csv(path, ds);
  const auto back = load_csv(path, LabelColumn{0, ""});
  EXPECT_EQ(back.x, ds.x);
  EXPECT_EQ(back.y, ds.y);
  fs::remove(path);
}

TEST(Csv, CategoricalLabelsByName) {
  const auto path = write_text("qgk-cat.csv", "a,kind,b\n1,cat,2\n3,dog,4\n5,cat,6\n");
  const auto ds = load_csv(path, LabelColumn{std::nullopt, "kind"});
  EXPECT_EQ(ds.y, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.label_names, (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(ds.features(), 2);
  EXPECT_DOUBLE_EQ(ds.x(1, 1), 4.0);
  fs::remove(path);
}

TEST(Csv, SixteenFeaturesLastColumnLabel) {
  std::ostringstream text;
  for (int j = 0; j < 16; ++j) text << "f" << j << ",";
  text << "y\n";
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 16; ++j) text << i * j * 0.5 << ",";
    text << (i % 2 ? "yes" : "no") << "\n";
  }
  const auto path = write_text("qgk-16.csv", text.str());
  const auto ds = load_csv(path);
  EXPECT_EQ(ds.features(), 16);
  EXPECT_EQ(ds.size(), 10u);
  EXPECT_EQ(ds.classes(), (std::vector<int>{0, 1}));
  fs::remove(path);
}

TEST(Csv, ErrorsNameTheCell) {
  const auto blank = write_text("qgk-blank.csv", "a,b,y\n1,2,0\n3,,1\n");
  try {
    (void)load_csv(blank);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("empty"), std::string::npos) << msg;
  }
  const auto text = write_text("qgk-text.csv", "a,y\nfoo,1\n2,0\n");
  EXPECT_THROW((void)load_csv(text), ParseError);
  EXPECT_THROW((void)load_csv(fs::temp_directory_path() / "qgk-missing-file.csv"), ParseError);
  fs::remove(blank);
  fs::remove(text);
}

TEST(Split, SizesAndStandardization) {
  const auto ds = make_moons(200, 0.2, 4);
  const auto [train, test] = split(ds, 0.1, 4);
  EXPECT_EQ(train.size(), 180u);
  EXPECT_EQ(test.size(), 20u);
  EXPECT_EQ(std::count(test.y.begin(), test.y.end(), 0), 10);
  const RealVector mean = train.x.colwise().mean();
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 1e-12);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const double var = (train.x.col(j).array() - mean(j)).square().mean();
    EXPECT_NEAR(var, 1.0, 1e-12);
  }
  ASSERT_TRUE(test.scaler.has_value());
  EXPECT_EQ(test.scaler->mean, train.scaler->mean);
}

TEST(Split, DeterministicAndRejectsTinyClasses) {
  const auto ds = make_circles(60, 0.1, 5);
  const auto a = split(ds, 0.2, 9);
  const auto b = split(ds, 0.2, 9);
  EXPECT_EQ(a.first.x, b.first.x);
  EXPECT_EQ(a.second.y, b.second.y);
  Dataset tiny;
  tiny.x = RealMatrix::Zero(5, 1);
  tiny.y = {0, 0, 0, 0, 1};
  EXPECT_THROW((void)split(tiny, 0.2, 0), PreconditionError);
}

TEST(Scaler, ConstantFeatureKeepsUnitScale) {
  RealMatrix x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  const auto s = Scaler::fit(x);
  EXPECT_DOUBLE_EQ(s.scale(1), 1.0);
  EXPECT_NEAR(s.scale(0), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_EQ(s.transform(x).col(1), RealVector::Zero(3));
}

TEST(Majority, Rate) {
  EXPECT_DOUBLE_EQ(majority_rate({0, 1, 1, 2}), 0.5);
  Dataset bad;
  bad.x = RealMatrix::Zero(2, 1);
  bad.y = {0};
  EXPECT_THROW(bad.validate(), PreconditionError);
}
