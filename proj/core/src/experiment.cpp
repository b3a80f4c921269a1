#include "qgk/experiment.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qgk {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Qgk:
      return "qgk";
    case KernelFamily::Rbf:
      return "rbf";
    case KernelFamily::Linear:
      return "linear";
  }
  return "?";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "qgk") return KernelFamily::Qgk;
  if (name == "rbf") return KernelFamily::Rbf;
  if (name == "linear") return KernelFamily::Linear;
  throw ConfigurationError("unknown kernel family '" + name + "'");
}

GroupingConfig ExperimentConfig::grouping() const {
  GroupingConfig g;
  g.eta = eta;
  g.scaling = scaling;
  g.width = width < 0.0 ? static_cast<double>(eta) : width;
  g.explicit_groups = explicit_groups;
  return g;
}

void ExperimentConfig::validate() const {
  if (eta < 1 || eta > kMaxQubits) {
    throw ConfigurationError("eta must lie in 1.." + std::to_string(kMaxQubits));
  }
  if (width > static_cast<double>(eta)) throw ConfigurationError("width must not exceed eta");
  if (seeds.empty()) throw ConfigurationError("at least one seed is required");
  if (!(dataset.test_fraction > 0.0 && dataset.test_fraction < 1.0)) {
    throw ConfigurationError("test_fraction must lie in (0, 1)");
  }
  if (dataset.kind == "csv" && dataset.path.empty()) {
    throw ConfigurationError("dataset=csv needs a csv path");
  }
  if (dataset.kind != "csv" && dataset.kind != "moons" && dataset.kind != "circles") {
    throw ConfigurationError("unknown dataset '" + dataset.kind + "'");
  }
  if (kernel == KernelFamily::Qgk && pretrain &&
      train.gradient.mode == GradientMode::Analytic &&
      embedding.mode != EmbeddingMode::Product) {
    throw ConfigurationError("analytic gradients need mode=product; use gradient=fd for sumexp");
  }
  if (!(svm.c > 0.0)) throw ConfigurationError("svm_c must be positive");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigurationError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigurationError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigurationError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

// "0,1,2" or "0..7"
std::vector<std::uint64_t> parse_seeds(const std::string& v) {
  std::vector<std::uint64_t> seeds;
  const auto dots = v.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_uint("seeds", v.substr(0, dots));
    const auto hi = parse_uint("seeds", v.substr(dots + 2));
    if (hi < lo) throw ConfigurationError("seeds: empty range '" + v + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) seeds.push_back(parse_uint("seeds", item));
  }
  return seeds;
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dataset",     "n",          "noise",        "factor",        "csv",
      "label_column", "has_header", "test_fraction", "eta",          "scaling",
      "width",       "groups",     "mode",         "initial_state", "init",
      "pretrain",    "epochs",     "learning_rate", "batch_size",   "beta1",
      "beta2",       "epsilon",    "gradient",     "fd_step",       "target",
      "kernel",      "rbf_gamma",  "svm_c",        "svm_tol",       "svm_max_passes",
      "seeds",       "output",     "trace_timing",
  };
  return keys;
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "dataset") c.dataset.kind = value;
    else if (key == "n") c.dataset.n = parse_uint(key, value);
    else if (key == "noise") c.dataset.noise = parse_double(key, value);
    else if (key == "factor") c.dataset.factor = parse_double(key, value);
    else if (key == "csv") c.dataset.path = value;
    else if (key == "label_column") c.dataset.label_column = value;
    else if (key == "has_header") c.dataset.has_header = parse_bool(key, value);
    else if (key == "test_fraction") c.dataset.test_fraction = parse_double(key, value);
    else if (key == "eta") c.eta = static_cast<int>(parse_uint(key, value));
    else if (key == "scaling") c.scaling = parse_scaling(value);
    else if (key == "width") c.width = value == "eta" ? -1.0 : parse_double(key, value);
    else if (key == "groups") c.explicit_groups = parse_uint(key, value);
    else if (key == "mode") c.embedding.mode = parse_embedding_mode(value);
    else if (key == "initial_state") c.embedding.initial_state = parse_initial_state(value);
    else if (key == "init") c.init = parse_init_scheme(value);
    else if (key == "pretrain") c.pretrain = parse_bool(key, value);
    else if (key == "epochs") c.train.epochs = parse_uint(key, value);
    else if (key == "learning_rate") c.train.learning_rate = parse_double(key, value);
    else if (key == "batch_size") c.train.batch_size = parse_uint(key, value);
    else if (key == "beta1") c.train.beta1 = parse_double(key, value);
    else if (key == "beta2") c.train.beta2 = parse_double(key, value);
    else if (key == "epsilon") c.train.epsilon = parse_double(key, value);
    else if (key == "gradient") {
      if (value == "analytic") c.train.gradient.mode = GradientMode::Analytic;
      else if (value == "fd") c.train.gradient.mode = GradientMode::FiniteDifference;
      else throw ConfigurationError("gradient must be analytic or fd, got '" + value + "'");
    } else if (key == "fd_step") c.train.gradient.fd_step = parse_double(key, value);
    else if (key == "target") c.train.gradient.target = parse_target_scheme(value);
    else if (key == "kernel") c.kernel = parse_kernel_family(value);
    else if (key == "rbf_gamma") c.rbf_gamma = parse_double(key, value);
    else if (key == "svm_c") c.svm.c = parse_double(key, value);
    else if (key == "svm_tol") c.svm.tol = parse_double(key, value);
    else if (key == "svm_max_passes") c.svm.max_passes = parse_uint(key, value);
    else if (key == "seeds") c.seeds = parse_seeds(value);
    else if (key == "output") c.output_dir = value;
    else if (key == "trace_timing") c.trace_timing = parse_bool(key, value);
    else throw ConfigurationError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

std::map<std::string, std::string> config_to_map(const ExperimentConfig& c) {
  std::map<std::string, std::string> kv;
  kv["dataset"] = c.dataset.kind;
  kv["n"] = std::to_string(c.dataset.n);
  kv["noise"] = format_double(c.dataset.noise);
  kv["factor"] = format_double(c.dataset.factor);
  kv["csv"] = c.dataset.path.string();
  kv["label_column"] = c.dataset.label_column;
  kv["has_header"] = c.dataset.has_header ? "true" : "false";
  kv["test_fraction"] = format_double(c.dataset.test_fraction);
  kv["eta"] = std::to_string(c.eta);
  kv["scaling"] = to_string(c.scaling);
  kv["width"] = format_double(c.grouping().width);
  kv["groups"] = std::to_string(group_count(c.grouping()));
  kv["mode"] = to_string(c.embedding.mode);
  kv["initial_state"] = to_string(c.embedding.initial_state);
  kv["init"] = to_string(c.init);
  kv["pretrain"] = c.pretrain ? "true" : "false";
  kv["epochs"] = std::to_string(c.train.epochs);
  kv["learning_rate"] = format_double(c.train.learning_rate > 0.0 ? c.train.learning_rate
                                                                  : default_learning_rate(c.eta));
  kv["batch_size"] = std::to_string(c.train.batch_size);
  kv["beta1"] = format_double(c.train.beta1);
  kv["beta2"] = format_double(c.train.beta2);
  kv["epsilon"] = format_double(c.train.epsilon);
  kv["gradient"] = c.train.gradient.mode == GradientMode::Analytic ? "analytic" : "fd";
  kv["fd_step"] = format_double(c.train.gradient.fd_step);
  kv["target"] = to_string(c.train.gradient.target);
  kv["kernel"] = to_string(c.kernel);
  kv["rbf_gamma"] = format_double(c.rbf_gamma);
  kv["svm_c"] = format_double(c.svm.c);
  kv["svm_tol"] = format_double(c.svm.tol);
  kv["svm_max_passes"] = std::to_string(c.svm.max_passes);
  kv["seeds"] = join_seeds(c.seeds);
  kv["output"] = c.output_dir.string();
  kv["trace_timing"] = c.trace_timing ? "true" : "false";
  return kv;
}

void write_resolved_config(std::ostream& out, const ExperimentConfig& config) {
  const auto kv = config_to_map(config);
  for (const auto& key : config_keys()) out << key << '=' << kv.at(key) << '\n';
}

fs::path resolve_output_dir(const fs::path& dir) {
  const char* root = std::getenv("QGK_OUTPUT_ROOT");
  if (root && *root && dir.is_relative()) return fs::path(root) / dir;
  return dir;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  const boost::math::students_t dist(static_cast<double>(values.size() - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  s.half_width = t * sd / std::sqrt(static_cast<double>(values.size()));
  return s;
}

Dataset load_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.kind == "moons") return make_moons(spec.n, spec.noise, seed);
  if (spec.kind == "circles") return make_circles(spec.n, spec.noise, seed, spec.factor);
  if (spec.kind == "csv") {
    LabelColumn label;
    if (!spec.label_column.empty()) {
      const bool numeric = std::all_of(spec.label_column.begin(), spec.label_column.end(),
                                       [](char c) { return c >= '0' && c <= '9'; });
      if (numeric) label.index = std::stoul(spec.label_column);
      else label.name = spec.label_column;
    }
    Dataset ds = load_csv(spec.path, label, spec.has_header);
    ds.seed = seed;
    return ds;
  }
  throw ConfigurationError("unknown dataset '" + spec.kind + "'");
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  std::vector<int> labels;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "label") continue;
    int v = 0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) + ": bad label");
    }
    labels.push_back(v);
  }
  return labels;
}

namespace {

template <typename F>
auto stage(std::uint64_t seed, const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(seed, name, e.what());
  }
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ordered_json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"ci95_half_width", s.half_width}, {"count", s.count}};
}

}  // namespace

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed, const fs::path& dir) {
  config.validate();
  SeedResult r;
  r.seed = seed;
  r.directory = dir;
  const bool write = !dir.empty();
  if (write) fs::create_directories(dir);

  auto [train_ds, test_ds] = stage(seed, "dataset", [&] {
    return split(load_dataset(config.dataset, seed), config.dataset.test_fraction, seed);
  });
  r.n_train = train_ds.size();
  r.n_test = test_ds.size();
  r.features = static_cast<std::size_t>(train_ds.features());
  r.majority_rate = majority_rate(test_ds.y);
  const TargetKernel target = target_kernel(train_ds.y, config.train.gradient.target);

  KernelMatrix k_train;
  KernelMatrix k_test;
  if (config.kernel == KernelFamily::Qgk) {
    const VggSet vgg = stage(seed, "grouping", [&] {
      return build_vgg_set(build_generator_set(config.eta), config.grouping());
    });
    r.groups = vgg.groups();
    const auto g = static_cast<Eigen::Index>(vgg.groups());
    ProjectionParams params = stage(seed, "projection", [&] {
      return init_params(train_ds.features(), g, seed, config.init);
    });
    if (config.pretrain) {
      TrainConfig tc = config.train;
      tc.seed = seed;
      const TrainResult tr = stage(seed, "pretrain", [&] {
        return train(params, train_ds.x, train_ds.y, vgg, config.embedding, tc);
      });
      params = tr.params;
      r.initial_alignment = tr.initial_alignment;
      if (write) {
        r.trace_path = dir / "trace.csv";
        std::ofstream out(r.trace_path);
        write_trace_csv(out, tr.trace, config.trace_timing);
      }
    }
    if (write) {
      save_checkpoint(dir / "params.txt",
                      Checkpoint{params, seed, config.pretrain ? config.train.epochs : 0});
    }
    stage(seed, "kernel", [&] {
      const auto train_states = embed_rows(vgg, project(params, train_ds.x), config.embedding);
      const auto test_states = embed_rows(vgg, project(params, test_ds.x), config.embedding);
      k_train = gram(train_states);
      k_test = cross_gram(test_states, train_states);
      return 0;
    });
  } else {
    stage(seed, "kernel", [&] {
      const ClassicalKernel family = config.kernel == KernelFamily::Rbf
                                         ? ClassicalKernel::rbf(config.rbf_gamma)
                                         : ClassicalKernel::linear();
      k_train = classical_kernel(train_ds.x, family);
      k_test = classical_cross_kernel(test_ds.x, train_ds.x, family);
      return 0;
    });
  }
  r.final_alignment = kta(k_train, target).alignment;
  if (!(config.kernel == KernelFamily::Qgk && config.pretrain)) r.initial_alignment = r.final_alignment;

  const SvmModel model = stage(seed, "svm", [&] { return fit(k_train.values, train_ds.y, config.svm); });
  r.svm_converged = model.converged();
  const auto predicted = stage(seed, "eval", [&] { return predict(model, k_test.values); });
  r.test_accuracy = accuracy(predicted, test_ds.y);
  r.train_accuracy = accuracy(predict(model, k_train.values), train_ds.y);

  if (write) {
    stage(seed, "write", [&] {
      k_train.provenance["seed"] = std::to_string(seed);
      k_test.provenance["seed"] = std::to_string(seed);
      r.kernel_path = dir / "kernel-train.csv";
      save_kernel(r.kernel_path, k_train);
      save_kernel(dir / "kernel-test.csv", k_test);
      save_model(dir / "svm-model.txt", model);
      write_labels(dir / "labels-train.csv", train_ds.y);
      write_labels(dir / "labels-test.csv", test_ds.y);
      std::vector<int> predicted_copy(predicted.begin(), predicted.end());
      write_labels(dir / "predictions.csv", predicted_copy);
      ordered_json j;
      j["seed"] = seed;
      j["test_accuracy"] = r.test_accuracy;
      j["train_accuracy"] = r.train_accuracy;
      j["majority_rate"] = r.majority_rate;
      j["initial_alignment"] = r.initial_alignment;
      j["final_alignment"] = r.final_alignment;
      j["svm_converged"] = r.svm_converged;
      j["n_train"] = r.n_train;
      j["n_test"] = r.n_test;
      j["features"] = r.features;
      j["groups"] = r.groups;
      j["kernel"] = "kernel-train.csv";
      j["trace"] = r.trace_path.empty() ? "" : "trace.csv";
      write_json(dir / "result.json", j);
      return 0;
    });
  }
  return r;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunResult result;
  result.directory = resolve_output_dir(config.output_dir);
  fs::create_directories(result.directory);
  {
    std::ofstream out(result.directory / "resolved-config");
    write_resolved_config(out, config);
  }
  std::vector<double> acc, fin, ini;
  for (auto seed : config.seeds) {
    const auto dir = result.directory / ("seed-" + std::to_string(seed));
    result.seeds.push_back(run_seed(config, seed, dir));
    acc.push_back(result.seeds.back().test_accuracy);
    fin.push_back(result.seeds.back().final_alignment);
    ini.push_back(result.seeds.back().initial_alignment);
  }
  result.accuracy = summarize(acc);
  result.final_alignment = summarize(fin);
  result.initial_alignment = summarize(ini);

  ordered_json j;
  j["kernel"] = to_string(config.kernel);
  j["pretrain"] = config.pretrain;
  j["dataset"] = config.dataset.kind;
  j["eta"] = config.eta;
  j["accuracy"] = summary_json(result.accuracy);
  j["final_alignment"] = summary_json(result.final_alignment);
  j["initial_alignment"] = summary_json(result.initial_alignment);
  ordered_json per_seed = ordered_json::array();
  for (const auto& s : result.seeds) {
    per_seed.push_back({{"seed", s.seed},
                        {"test_accuracy", s.test_accuracy},
                        {"final_alignment", s.final_alignment},
                        {"directory", "seed-" + std::to_string(s.seed)}});
  }
  j["seeds"] = per_seed;
  write_json(result.directory / "result.json", j);
  return result;
}

double rescore_seed_dir(const fs::path& dir) {
  const KernelMatrix k_test = load_kernel(dir / "kernel-test.csv");
  const SvmModel model = load_model(dir / "svm-model.txt");
  const auto truth = read_labels(dir / "labels-test.csv");
  return accuracy(predict(model, k_test.values), truth);
}

std::vector<SweepRow> run_metrics_sweep(const std::vector<int>& etas,
                                        const std::vector<Scaling>& scalings,
                                        const std::vector<double>& widths,
                                        const MetricsOptions& options) {
  std::vector<SweepRow> rows;
  for (int eta : etas) {
    const GeneratorSet gs = build_generator_set(eta);
    for (Scaling scaling : scalings) {
      for (double w : widths) {
        GroupingConfig gc;
        gc.eta = eta;
        gc.scaling = scaling;
        gc.width = w < 0.0 ? static_cast<double>(eta) : w;
        const VggSet vgg = build_vgg_set(gs, gc);
        rows.push_back({eta, scaling, gc.width, compute_metrics(vgg, options)});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const auto old_precision = out.precision(17);
  out << "eta,scaling,width,groups,parameter_count,entanglement_mean,entanglement_max,"
         "entanglement_std,expressibility,total_mass,balance,anisotropy_sum,anisotropy_ratio\n";
  for (const auto& r : rows) {
    const auto& m = r.report;
    out << r.eta << ',' << to_string(r.scaling) << ',' << r.width << ',' << m.groups << ','
        << m.parameter_count << ',' << m.entanglement.mean << ',' << m.entanglement.max << ','
        << m.entanglement.std << ',' << m.expressibility << ',' << m.bounds.sums.total_mass << ','
        << m.bounds.sums.balance << ',' << m.bounds.sums.anisotropy_sum << ','
        << m.bounds.anisotropy_ratio << '\n';
  }
  out.precision(old_precision);
}

GammaChoice parse_gamma(const std::string& text) {
  if (text == "eta") return {0.0, true};
  const double v = parse_double("gamma", text);
  if (!(v > 0.0)) throw ConfigurationError("gamma must be positive");
  return {v, false};
}

BreakevenTables run_breakeven(const std::vector<int>& etas, const std::vector<GammaChoice>& gammas) {
  BreakevenTables t;
  for (const auto& gamma : gammas) {
    for (int eta : etas) {
      t.bounds.push_back(efficiency_bound(eta, gamma.equals_eta ? eta : gamma.value));
    }
  }
  t.benchmarks = benchmark_costs();
  return t;
}

}  // namespace qgk
