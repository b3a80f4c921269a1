#include "qgk/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qgk/config.hpp"
#include "qgk/random.hpp"

namespace qgk {

Scaler Scaler::fit(const RealMatrix& x) {
  if (x.rows() == 0) throw PreconditionError("Scaler::fit: empty matrix");
  Scaler s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var =
        (x.col(j).array() - s.mean(j)).square().sum() / static_cast<double>(x.rows());
    const double sd = std::sqrt(var);
    s.scale(j) = sd > 1e-300 ? sd : 1.0;
  }
  return s;
}

RealMatrix Scaler::transform(const RealMatrix& x) const {
  if (x.cols() != mean.size()) throw PreconditionError("Scaler::transform: feature count mismatch");
  RealMatrix out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out.col(j) = (x.col(j).array() - mean(j)) / scale(j);
  }
  return out;
}

std::vector<int> Dataset::classes() const {
  std::vector<int> c(y.begin(), y.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

void Dataset::validate() const {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw PreconditionError("dataset '" + name + "': " + std::to_string(x.rows()) +
                            " feature rows but " + std::to_string(y.size()) + " labels");
  }
  if (!x.allFinite()) throw PreconditionError("dataset '" + name + "': non-finite feature");
  for (int label : y) {
    if (label < 0) throw PreconditionError("dataset '" + name + "': negative label");
  }
}

namespace {

double linspace(std::size_t i, std::size_t count, double stop, bool endpoint) {
  if (count == 1) return 0.0;
  const double denom = static_cast<double>(endpoint ? count - 1 : count);
  return stop * static_cast<double>(i) / denom;
}

void add_noise(RealMatrix& x, double noise, CounterRng& rng) {
  if (noise == 0.0) return;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) += noise * rng.normal();
  }
}

}  // namespace

Dataset make_moons(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 4) throw PreconditionError("make_moons: n must be at least 4");
  if (!(noise >= 0.0)) throw PreconditionError("make_moons: noise must be non-negative");
  const std::size_t outer = n / 2;
  const std::size_t inner = n - outer;
  Dataset ds;
  ds.name = "moons";
  ds.seed = seed;
  ds.x.resize(static_cast<Eigen::Index>(n), 2);
  ds.y.resize(n);
  for (std::size_t i = 0; i < outer; ++i) {
    const double t = linspace(i, outer, std::numbers::pi, true);
    ds.x(static_cast<Eigen::Index>(i), 0) = std::cos(t);
    ds.x(static_cast<Eigen::Index>(i), 1) = std::sin(t);
    ds.y[i] = 0;
  }
  for (std::size_t i = 0; i < inner; ++i) {
    const double t = linspace(i, inner, std::numbers::pi, true);
    const auto r = static_cast<Eigen::Index>(outer + i);
    ds.x(r, 0) = 1.0 - std::cos(t);
    ds.x(r, 1) = 0.5 - std::sin(t);
    ds.y[outer + i] = 1;
  }
  CounterRng rng(seed, 0xDA7A);
  add_noise(ds.x, noise, rng);
  return ds;
}

Dataset make_circles(std::size_t n, double noise, std::uint64_t seed, double factor) {
  if (n < 4) throw PreconditionError("make_circles: n must be at least 4");
  if (!(factor > 0.0 && factor < 1.0)) {
    throw PreconditionError("make_circles: factor must lie in (0, 1)");
  }
  if (!(noise >= 0.0)) throw PreconditionError("make_circles: noise must be non-negative");
  const std::size_t outer = n / 2;
  const std::size_t inner = n - outer;
  Dataset ds;
  ds.name = "circles";
  ds.seed = seed;
  ds.x.resize(static_cast<Eigen::Index>(n), 2);
  ds.y.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < outer; ++i) {
    const double t = linspace(i, outer, two_pi, false);
    ds.x(static_cast<Eigen::Index>(i), 0) = std::cos(t);
    ds.x(static_cast<Eigen::Index>(i), 1) = std::sin(t);
    ds.y[i] = 0;
  }
  for (std::size_t i = 0; i < inner; ++i) {
    const double t = linspace(i, inner, two_pi, false);
    const auto r = static_cast<Eigen::Index>(outer + i);
    ds.x(r, 0) = factor * std::cos(t);
    ds.x(r, 1) = factor * std::sin(t);
    ds.y[outer + i] = 1;
  }
  CounterRng rng(seed, 0xC14C);
  add_noise(ds.x, noise, rng);
  return ds;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_label_int(const std::string& s, int& out) {
  if (s.empty() || s.size() > 9) return false;
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  out = std::stoi(s);
  return true;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_csv: cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  if (has_header) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) break;
    }
    header = split_row(trim(line));
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw ParseError("load_csv: " + path.string() + " has no data rows");

  const std::size_t width = has_header ? header.size() : rows.front().size();
  if (width < 2) throw ParseError("load_csv: need a label and at least one feature column");
  std::size_t label_col = width - 1;
  if (!label.name.empty()) {
    if (!has_header) throw ParseError("load_csv: label column by name needs a header");
    const auto it = std::find(header.begin(), header.end(), label.name);
    if (it == header.end()) throw ParseError("load_csv: no column named '" + label.name + "'");
    label_col = static_cast<std::size_t>(it - header.begin());
  } else if (label.index) {
    label_col = *label.index;
    if (label_col >= width) {
      throw ParseError("load_csv: label column " + std::to_string(label_col) + " out of range");
    }
  }

  Dataset ds;
  ds.name = path.stem().string();
  ds.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
  std::vector<std::string> raw_labels;
  raw_labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::string where = path.filename().string() + " line " + std::to_string(row_lines[r]);
    if (cells.size() != width) {
      throw ParseError("load_csv: " + where + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(width));
    }
    Eigen::Index f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_real(cells[c], v)) {
        const std::string col = has_header ? "'" + header[c] + "'" : std::to_string(c);
        throw ParseError("load_csv: " + where + " column " + col + ": " +
                         (cells[c].empty() ? "empty feature cell" : "non-numeric '" + cells[c] + "'"));
      }
      ds.x(static_cast<Eigen::Index>(r), f++) = v;
    }
    if (cells[label_col].empty()) throw ParseError("load_csv: " + where + " missing label");
    raw_labels.push_back(cells[label_col]);
  }

  bool all_int = true;
  std::vector<int> ints(raw_labels.size());
  for (std::size_t r = 0; r < raw_labels.size() && all_int; ++r) {
    all_int = parse_label_int(raw_labels[r], ints[r]);
  }
  if (all_int) {
    ds.y = std::move(ints);
    const int top = *std::max_element(ds.y.begin(), ds.y.end());
    ds.label_names.resize(static_cast<std::size_t>(top) + 1);
    for (int c = 0; c <= top; ++c) ds.label_names[static_cast<std::size_t>(c)] = std::to_string(c);
  } else {
    std::map<std::string, int> ids;
    for (const auto& s : raw_labels) {
      auto [it, inserted] = ids.try_emplace(s, static_cast<int>(ids.size()));
      if (inserted) ds.label_names.push_back(s);
      ds.y.push_back(it->second);
    }
  }
  ds.validate();
  return ds;
}

void write_csv(std::ostream& out, const Dataset& ds) {
  ds.validate();
  const auto old_precision = out.precision(17);
  out << "label";
  for (Eigen::Index j = 0; j < ds.x.cols(); ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < ds.y.size(); ++i) {
    out << ds.y[i];
    for (Eigen::Index j = 0; j < ds.x.cols(); ++j) out << ',' << ds.x(static_cast<Eigen::Index>(i), j);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open " + path.string());
  write_csv(out, ds);
}

namespace {

Dataset take(const Dataset& ds, const std::vector<std::size_t>& idx, const std::string& suffix) {
  Dataset out;
  out.name = ds.name + suffix;
  out.seed = ds.seed;
  out.label_names = ds.label_names;
  out.x.resize(static_cast<Eigen::Index>(idx.size()), ds.x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = ds.x.row(static_cast<Eigen::Index>(idx[i]));
    out.y.push_back(ds.y[idx[i]]);
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                                  bool stratified) {
  ds.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw PreconditionError("split: test_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) throw PreconditionError("split: degenerate split size");

  CounterRng rng(seed, 0x5B17);
  std::vector<std::size_t> test_idx;
  std::vector<std::size_t> train_idx;

  if (stratified) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[ds.y[i]].push_back(i);
    struct Share {
      int label;
      std::size_t count;
      double remainder;
    };
    std::vector<Share> shares;
    std::size_t assigned = 0;
    for (auto& [label, members] : by_class) {
      if (members.size() < 2) {
        throw PreconditionError("split: class " + std::to_string(label) +
                                " has fewer than 2 samples");
      }
      const double exact = static_cast<double>(n_test) * static_cast<double>(members.size()) /
                           static_cast<double>(n);
      const auto base = static_cast<std::size_t>(std::floor(exact));
      shares.push_back({label, base, exact - static_cast<double>(base)});
      assigned += base;
    }
    if (n_test > n - shares.size()) {
      throw PreconditionError("split: test fraction leaves a class without training samples");
    }
    std::vector<std::size_t> order(shares.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return shares[a].remainder > shares[b].remainder;
    });
    for (std::size_t k = 0; assigned < n_test; k = (k + 1) % order.size()) {
      auto& s = shares[order[k]];
      if (s.count + 1 < by_class[s.label].size()) {
        ++s.count;
        ++assigned;
      }
    }
    for (const auto& s : shares) {
      auto members = by_class[s.label];
      auto sub = rng.split(static_cast<std::uint64_t>(s.label));
      sub.shuffle(std::span<std::size_t>(members));
      test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(s.count));
      train_idx.insert(train_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(s.count), members.end());
    }
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(std::span<std::size_t>(all));
    test_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(n_test), all.end());
  }
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  Dataset train = take(ds, train_idx, "-train");
  Dataset test = take(ds, test_idx, "-test");
  const Scaler scaler = Scaler::fit(train.x);
  train.x = scaler.transform(train.x);
  test.x = scaler.transform(test.x);
  train.scaler = scaler;
  test.scaler = scaler;
  train.seed = test.seed = seed;
  return {std::move(train), std::move(test)};
}

double majority_rate(const std::vector<int>& labels) {
  if (labels.empty()) return 0.0;
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  std::size_t best = 0;
  for (const auto& [label, c] : counts) best = std::max(best, c);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace qgk
