#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgk/densela.hpp"

namespace qgk {

struct Scaler {
  RealVector mean;
  RealVector scale;  // population std, 1 where a feature is constant

  [[nodiscard]] static Scaler fit(const RealMatrix& x);
  [[nodiscard]] RealMatrix transform(const RealMatrix& x) const;
};

struct Dataset {
  RealMatrix x;
  std::vector<int> y;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<Scaler> scaler;
  // Original label text per class id, filled by load_csv.
  std::vector<std::string> label_names;

  [[nodiscard]] std::size_t size() const { return y.size(); }
  [[nodiscard]] Eigen::Index features() const { return x.cols(); }
  [[nodiscard]] std::vector<int> classes() const;
  // Throws PreconditionError on shape mismatch, NaN, or negative labels.
  void validate() const;
};

/// Two interleaving half circles: class 0 on (cos t, sin t), class 1 on
/// (1 − cos t, 0.5 − sin t), t = linspace(0, π). Gaussian noise per coordinate.
[[nodiscard]] Dataset make_moons(std::size_t n, double noise, std::uint64_t seed);

/// Concentric circles: class 0 radius 1, class 1 radius `factor`, angles
/// linspace(0, 2π) without the endpoint.
[[nodiscard]] Dataset make_circles(std::size_t n, double noise, std::uint64_t seed,
                                   double factor = 0.8);

struct LabelColumn {
  std::optional<std::size_t> index;  // unset: last column unless `name` is given
  std::string name;
};

/// Comma-separated ingestion. Labels that are all non-negative integers keep
/// their values; anything else is mapped to dense ids in first-appearance order.
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label = {},
                               bool has_header = true);

// Header label,f0,...,f{d−1}; 17 significant digits.
void write_csv(std::ostream& out, const Dataset& ds);
void write_csv(const std::filesystem::path& path, const Dataset& ds);

/// Stratified shuffle split. Test size is ⌈fraction·n⌉ distributed over classes
/// by largest remainder. Both halves are standardized with train statistics.
[[nodiscard]] std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                                std::uint64_t seed, bool stratified = true);

// Majority-class rate of a label vector.
[[nodiscard]] double majority_rate(const std::vector<int>& labels);

}  // namespace qgk
