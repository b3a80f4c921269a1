// qgk: command-line driver for datasets, kernels, KTA training, SVM evaluation,
// metric sweeps and break-even tables.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgk/experiment.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_etas(const std::string& text) {
  std::vector<int> etas;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int e = lo; e <= hi; ++e) etas.push_back(e);
    return etas;
  }
  for (const auto& s : split_list(text)) etas.push_back(std::stoi(s));
  return etas;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw qgk::Error("cannot write " + path.string());
  return out;
}

// Options shared by every command that builds a grouping and embedding.
struct QgkFlags {
  int eta = 2;
  std::string scaling = "exponential";
  std::string width = "eta";
  std::size_t groups = 0;
  std::string mode = "product";
  std::string initial_state = "uniform";

  void attach(CLI::App* app) {
    app->add_option("--eta", eta, "Number of qubits")->capture_default_str();
    app->add_option("--scaling", scaling, "linear|quadratic|exponential|all|explicit")
        ->capture_default_str();
    app->add_option("--width", width, "Projection width w, or 'eta'")->capture_default_str();
    app->add_option("--groups", groups, "Group count for scaling=explicit");
    app->add_option("--mode", mode, "product|sumexp")->capture_default_str();
    app->add_option("--initial-state", initial_state, "uniform|ground")->capture_default_str();
  }

  [[nodiscard]] qgk::GroupingConfig grouping() const {
    qgk::GroupingConfig g;
    g.eta = eta;
    g.scaling = qgk::parse_scaling(scaling);
    g.width = width == "eta" ? static_cast<double>(eta) : std::stod(width);
    g.explicit_groups = groups;
    return g;
  }

  [[nodiscard]] qgk::EmbeddingConfig embedding() const {
    return {qgk::parse_embedding_mode(mode), qgk::parse_initial_state(initial_state)};
  }
};

qgk::Dataset read_dataset(const fs::path& path) {
  qgk::LabelColumn label;
  label.name = "label";
  return qgk::load_csv(path, label, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum generator kernels"};
  app.require_subcommand(1);
  std::string stage = "cli";

  // dataset ---------------------------------------------------------------
  auto* ds_cmd = app.add_subcommand("dataset", "Generate or ingest a dataset and write it as CSV");
  ds_cmd->set_config("--config");
  std::string ds_kind = "moons";
  std::size_t ds_n = 200;
  double ds_noise = 0.2, ds_factor = 0.8, ds_split = 0.0;
  std::uint64_t ds_seed = 0;
  std::string ds_csv, ds_label;
  bool ds_no_header = false;
  fs::path ds_out = "dataset.csv";
  ds_cmd->add_option("--kind", ds_kind, "moons|circles|csv")->capture_default_str();
  ds_cmd->add_option("--n", ds_n)->capture_default_str();
  ds_cmd->add_option("--noise", ds_noise)->capture_default_str();
  ds_cmd->add_option("--factor", ds_factor)->capture_default_str();
  ds_cmd->add_option("--seed", ds_seed)->capture_default_str();
  ds_cmd->add_option("--csv", ds_csv, "Input file for kind=csv");
  ds_cmd->add_option("--label-column", ds_label, "Label column index or name");
  ds_cmd->add_flag("--no-header", ds_no_header);
  ds_cmd->add_option("--split", ds_split,
                     "Test fraction; writes <out>-train.csv and <out>-test.csv standardized");
  ds_cmd->add_option("--out", ds_out)->capture_default_str();

  // train -----------------------------------------------------------------
  auto* tr_cmd = app.add_subcommand("train", "KTA pre-training of the projection");
  tr_cmd->set_config("--config");
  QgkFlags tr_flags;
  tr_flags.attach(tr_cmd);
  fs::path tr_data, tr_out = "train-out";
  std::string tr_init = "scaled_uniform", tr_gradient = "analytic", tr_target = "multiclass";
  qgk::TrainConfig tr_config;
  tr_cmd->add_option("--data", tr_data, "Training CSV with a 'label' column")->required();
  tr_cmd->add_option("--init", tr_init)->capture_default_str();
  tr_cmd->add_option("--epochs", tr_config.epochs)->capture_default_str();
  tr_cmd->add_option("--learning-rate", tr_config.learning_rate, "0 picks 10^-(eta-1)");
  tr_cmd->add_option("--batch-size", tr_config.batch_size, "0 picks full batch up to 512");
  tr_cmd->add_option("--gradient", tr_gradient, "analytic|fd")->capture_default_str();
  tr_cmd->add_option("--target", tr_target, "binary|multiclass")->capture_default_str();
  tr_cmd->add_option("--seed", tr_config.seed)->capture_default_str();
  tr_cmd->add_option("--out", tr_out, "Directory for params.txt and trace.csv")
      ->capture_default_str();

  // kernel ----------------------------------------------------------------
  auto* k_cmd = app.add_subcommand("kernel", "Build train and test kernel matrices");
  k_cmd->set_config("--config");
  QgkFlags k_flags;
  k_flags.attach(k_cmd);
  fs::path k_data, k_test, k_params, k_out = "kernel-out";
  std::string k_family = "qgk", k_init = "scaled_uniform";
  std::uint64_t k_seed = 0;
  double k_gamma = 0.0;
  k_cmd->add_option("--data", k_data, "Training CSV")->required();
  k_cmd->add_option("--test", k_test, "Held-out CSV");
  k_cmd->add_option("--params", k_params, "Checkpoint from `train`; omitted = static init");
  k_cmd->add_option("--family", k_family, "qgk|rbf|linear")->capture_default_str();
  k_cmd->add_option("--rbf-gamma", k_gamma, "0 picks 1/(d Var X)");
  k_cmd->add_option("--init", k_init)->capture_default_str();
  k_cmd->add_option("--seed", k_seed)->capture_default_str();
  k_cmd->add_option("--out", k_out)->capture_default_str();

  // eval ------------------------------------------------------------------
  auto* ev_cmd = app.add_subcommand("eval", "Fit the SVM on a train kernel and score a test kernel");
  ev_cmd->set_config("--config");
  fs::path ev_dir;
  double ev_c = 1.0, ev_tol = 1e-3;
  ev_cmd->add_option("--dir", ev_dir, "Directory written by `kernel`")->required();
  ev_cmd->add_option("--c", ev_c)->capture_default_str();
  ev_cmd->add_option("--tol", ev_tol)->capture_default_str();

  // metrics ---------------------------------------------------------------
  auto* m_cmd = app.add_subcommand("metrics", "Entanglement/expressibility sweep over groupings");
  m_cmd->set_config("--config");
  std::string m_etas = "1..4", m_scalings = "exponential", m_widths = "0,1,eta";
  std::string m_mode = "product", m_initial = "uniform";
  qgk::MetricsOptions m_options;
  fs::path m_out = "metrics.csv", m_report_dir;
  m_cmd->add_option("--etas", m_etas)->capture_default_str();
  m_cmd->add_option("--scalings", m_scalings)->capture_default_str();
  m_cmd->add_option("--widths", m_widths)->capture_default_str();
  m_cmd->add_option("--mode", m_mode)->capture_default_str();
  m_cmd->add_option("--initial-state", m_initial)->capture_default_str();
  m_cmd->add_option("--samples", m_options.entanglement_samples)->capture_default_str();
  m_cmd->add_option("--expr-samples", m_options.expressibility_samples)->capture_default_str();
  m_cmd->add_option("--seed", m_options.seed)->capture_default_str();
  m_cmd->add_option("--out", m_out)->capture_default_str();
  m_cmd->add_option("--report-dir", m_report_dir,
                    "Also write one key=value report and per-sample CSV per row");

  // breakeven -------------------------------------------------------------
  auto* b_cmd = app.add_subcommand("breakeven", "Efficiency-bound and benchmark cost tables");
  b_cmd->set_config("--config");
  std::string b_etas = "2..8", b_gammas = "1,eta";
  fs::path b_out = "breakeven.csv", b_bench = "benchmark-costs.csv";
  b_cmd->add_option("--etas", b_etas)->capture_default_str();
  b_cmd->add_option("--gammas", b_gammas, "Comma list; 'eta' means gamma = eta")
      ->capture_default_str();
  b_cmd->add_option("--out", b_out)->capture_default_str();
  b_cmd->add_option("--benchmarks", b_bench)->capture_default_str();

  // experiment ------------------------------------------------------------
  auto* x_cmd = app.add_subcommand("experiment", "Full pipeline over all configured seeds");
  x_cmd->set_config("--config", "", "Flat key=value file; flags override it");
  std::map<std::string, std::string> x_values;
  for (const auto& key : qgk::config_keys()) {
    x_cmd->add_option("--" + key, x_values[key]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ds_cmd) {
      stage = "dataset";
      qgk::DatasetSpec spec;
      spec.kind = ds_kind;
      spec.n = ds_n;
      spec.noise = ds_noise;
      spec.factor = ds_factor;
      spec.path = ds_csv;
      spec.label_column = ds_label;
      spec.has_header = !ds_no_header;
      const qgk::Dataset ds = qgk::load_dataset(spec, ds_seed);
      if (ds_split > 0.0) {
        const auto [train, test] = qgk::split(ds, ds_split, ds_seed);
        const auto stem = (ds_out.parent_path() / ds_out.stem()).string();
        auto tr = open_out(stem + "-train.csv");
        qgk::write_csv(tr, train);
        auto te = open_out(stem + "-test.csv");
        qgk::write_csv(te, test);
        std::cout << "wrote " << stem << "-train.csv (" << train.size() << ") and " << stem
                  << "-test.csv (" << test.size() << ")\n";
      } else {
        auto out = open_out(ds_out);
        qgk::write_csv(out, ds);
        std::cout << "wrote " << ds_out.string() << " (n=" << ds.size()
                  << ", d=" << ds.features() << ")\n";
      }
    } else if (*tr_cmd) {
      stage = "train";
      const qgk::Dataset ds = read_dataset(tr_data);
      const auto vgg =
          qgk::build_vgg_set(qgk::build_generator_set(tr_flags.eta), tr_flags.grouping());
      const auto init = qgk::init_params(ds.features(), static_cast<Eigen::Index>(vgg.groups()),
                                         tr_config.seed, qgk::parse_init_scheme(tr_init));
      if (tr_gradient == "fd") tr_config.gradient.mode = qgk::GradientMode::FiniteDifference;
      else if (tr_gradient != "analytic") throw qgk::ConfigurationError("gradient must be analytic or fd");
      tr_config.gradient.target = qgk::parse_target_scheme(tr_target);
      const auto result = qgk::train(init, ds.x, ds.y, vgg, tr_flags.embedding(), tr_config);
      fs::create_directories(tr_out);
      qgk::save_checkpoint(tr_out / "params.txt",
                           qgk::Checkpoint{result.params, tr_config.seed, tr_config.epochs});
      auto trace = open_out(tr_out / "trace.csv");
      qgk::write_trace_csv(trace, result.trace);
      std::cout << "initial_alignment=" << result.initial_alignment << '\n'
                << "final_alignment=" << result.final_alignment << '\n';
    } else if (*k_cmd) {
      stage = "kernel";
      const qgk::Dataset train = read_dataset(k_data);
      std::optional<qgk::Dataset> test;
      if (!k_test.empty()) test = read_dataset(k_test);
      fs::create_directories(k_out);
      qgk::KernelMatrix k_train, k_cross;
      const auto family = qgk::parse_kernel_family(k_family);
      if (family == qgk::KernelFamily::Qgk) {
        const auto vgg =
            qgk::build_vgg_set(qgk::build_generator_set(k_flags.eta), k_flags.grouping());
        const auto params =
            k_params.empty()
                ? qgk::init_params(train.features(), static_cast<Eigen::Index>(vgg.groups()),
                                   k_seed, qgk::parse_init_scheme(k_init))
                : qgk::load_checkpoint(k_params).params;
        const auto states = qgk::embed_rows(vgg, qgk::project(params, train.x), k_flags.embedding());
        k_train = qgk::gram(states);
        if (test) {
          const auto test_states =
              qgk::embed_rows(vgg, qgk::project(params, test->x), k_flags.embedding());
          k_cross = qgk::cross_gram(test_states, states);
        }
      } else {
        const auto kind = family == qgk::KernelFamily::Rbf ? qgk::ClassicalKernel::rbf(k_gamma)
                                                           : qgk::ClassicalKernel::linear();
        k_train = qgk::classical_kernel(train.x, kind);
        if (test) k_cross = qgk::classical_cross_kernel(test->x, train.x, kind);
      }
      qgk::save_kernel(k_out / "kernel-train.csv", k_train);
      qgk::write_labels(k_out / "labels-train.csv", train.y);
      if (test) {
        qgk::save_kernel(k_out / "kernel-test.csv", k_cross);
        qgk::write_labels(k_out / "labels-test.csv", test->y);
      }
      const auto target = qgk::target_kernel(train.y, qgk::TargetScheme::Multiclass);
      std::cout << "alignment=" << qgk::kta(k_train, target).alignment << '\n';
    } else if (*ev_cmd) {
      stage = "eval";
      const auto k_train = qgk::load_kernel(ev_dir / "kernel-train.csv");
      const auto y_train = qgk::read_labels(ev_dir / "labels-train.csv");
      qgk::SvmConfig cfg;
      cfg.c = ev_c;
      cfg.tol = ev_tol;
      const auto model = qgk::fit(k_train.values, y_train, cfg);
      qgk::save_model(ev_dir / "svm-model.txt", model);
      std::cout << "train_accuracy="
                << qgk::accuracy(qgk::predict(model, k_train.values), y_train) << '\n';
      if (fs::exists(ev_dir / "kernel-test.csv")) {
        std::cout << "test_accuracy=" << qgk::rescore_seed_dir(ev_dir) << '\n';
      }
    } else if (*m_cmd) {
      stage = "metrics";
      std::vector<qgk::Scaling> scalings;
      for (const auto& s : split_list(m_scalings)) scalings.push_back(qgk::parse_scaling(s));
      std::vector<double> widths;
      for (const auto& w : split_list(m_widths)) widths.push_back(w == "eta" ? -1.0 : std::stod(w));
      m_options.embedding = {qgk::parse_embedding_mode(m_mode), qgk::parse_initial_state(m_initial)};
      const auto rows = qgk::run_metrics_sweep(parse_etas(m_etas), scalings, widths, m_options);
      auto out = open_out(m_out);
      qgk::write_sweep_csv(out, rows);
      if (!m_report_dir.empty()) {
        for (const auto& r : rows) {
          std::ostringstream name;
          name << "eta" << r.eta << '-' << qgk::to_string(r.scaling) << "-w" << r.width;
          auto rep = open_out(m_report_dir / (name.str() + ".txt"));
          qgk::write_metrics_report(rep, r.report);
          auto samples = open_out(m_report_dir / (name.str() + "-q.csv"));
          qgk::write_entanglement_samples(samples, r.report.entanglement);
        }
      }
      std::cout << "wrote " << rows.size() << " rows to " << m_out.string() << '\n';
    } else if (*b_cmd) {
      stage = "breakeven";
      std::vector<qgk::GammaChoice> gammas;
      for (const auto& g : split_list(b_gammas)) gammas.push_back(qgk::parse_gamma(g));
      const auto tables = qgk::run_breakeven(parse_etas(b_etas), gammas);
      auto out = open_out(b_out);
      qgk::write_breakeven_csv(out, tables.bounds);
      auto bench = open_out(b_bench);
      qgk::write_benchmark_csv(bench, tables.benchmarks);
      qgk::write_breakeven_csv(std::cout, tables.bounds);
    } else if (*x_cmd) {
      stage = "experiment";
      std::map<std::string, std::string> kv;
      for (const auto& [key, value] : x_values) {
        if (!value.empty()) kv[key] = value;
      }
      const auto config = qgk::config_from_map(kv);
      const auto result = qgk::run_experiment(config);
      for (const auto& s : result.seeds) {
        std::cout << "seed " << s.seed << ": accuracy=" << s.test_accuracy
                  << " alignment=" << s.initial_alignment << " -> " << s.final_alignment << '\n';
      }
      std::cout << "accuracy=" << result.accuracy.mean << " ± " << result.accuracy.half_width
                << "\nfinal_alignment=" << result.final_alignment.mean << " ± "
                << result.final_alignment.half_width << "\nwrote " << result.directory.string()
                << '\n';
    }
  } catch (const qgk::StageError& e) {
    std::cerr << "qgk " << stage << ": error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qgk " << stage << ": error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
