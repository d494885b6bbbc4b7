// crcond: dataset condensation via purity-guided labeled centers.
//
// Subcommands: generate (synthetic CSV datasets), condense (CSV -> model +
// purity trace), evaluate (classifier comparison report), plot (SVG scatter).
// Every run writes a <primary-output>.manifest.json recording the resolved
// configuration, seeds, paths, stage timings, and result metrics; re-running
// the recorded argv reproduces the artifacts byte for byte.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crcond/condenser.hpp"
#include "crcond/eval.hpp"
#include "crcond/io.hpp"
#include "crcond/svg.hpp"
#include "crcond/synth.hpp"

namespace {

using crcond::Index;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

nlohmann::json base_manifest(const std::string& subcommand,
                             const std::vector<std::string>& argv) {
  nlohmann::json doc;
  doc["subcommand"] = subcommand;
  doc["argv"] = argv;
  return doc;
}

void write_manifest(const std::string& artifact_path, const nlohmann::json& doc) {
  crcond::write_text_file(artifact_path + ".manifest.json", doc.dump(2) + "\n");
}

struct GenerateArgs {
  std::string family;
  std::string preset = "clear";
  std::optional<double> noise_std;
  int n = 0;
  std::uint64_t seed = 0;
  double factor = 0.5;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv) {
  const double noise = a.noise_std ? *a.noise_std : crcond::preset_noise_std(a.preset);
  const crcond::NoiseParams noise_params{noise, a.seed};

  const auto t0 = Clock::now();
  const crcond::Dataset ds = a.family == "circles"
                                 ? crcond::make_circles(a.n, noise_params, a.factor)
                                 : crcond::make_moons(a.n, noise_params);
  const double gen_ms = ms_since(t0);

  const auto t1 = Clock::now();
  crcond::write_csv(a.out_path, ds);
  const double write_ms = ms_since(t1);

  std::vector<int> class_counts(static_cast<std::size_t>(ds.n_classes), 0);
  std::vector<std::string> label_names;
  for (Index i = 0; i < ds.labels.size(); ++i) {
    class_counts[static_cast<std::size_t>(ds.labels[i])] += 1;
  }
  for (int c = 0; c < ds.n_classes; ++c) label_names.push_back(std::to_string(c));

  nlohmann::json doc = base_manifest("generate", argv);
  doc["config"] = {{"family", a.family},
                   {"preset", a.preset},
                   {"noise_std", noise},
                   {"n", a.n},
                   {"factor", a.factor}};
  doc["seeds"] = {{"seed", a.seed}};
  doc["outputs"] = {{"out_path", a.out_path}};
  doc["timings_ms"] = {{"generate", gen_ms}, {"write", write_ms}};
  doc["metrics"] = {{"rows", ds.instances.rows()}, {"class_counts", class_counts}};
  doc["label_names"] = label_names;
  write_manifest(a.out_path, doc);

  std::cout << "wrote " << a.out_path << " (" << ds.instances.rows() << " rows)\n";
  return 0;
}

struct CondenseArgs {
  std::string in_path;
  std::vector<int> k_per_class;
  double step_scale = 1.0;
  int patience = 3;
  int max_iter = 100;
  std::uint64_t seed = 0;
  std::string out_model;
  std::string out_trace;
};

int cmd_condense(const CondenseArgs& a, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  const crcond::LoadedDataset loaded = crcond::read_csv(a.in_path);
  const double load_ms = ms_since(t0);

  crcond::CondenseConfig cfg;
  cfg.k_per_class.resize(static_cast<Index>(a.k_per_class.size()));
  for (std::size_t i = 0; i < a.k_per_class.size(); ++i) {
    cfg.k_per_class[static_cast<Index>(i)] = a.k_per_class[i];
  }
  cfg.step_scale = a.step_scale;
  cfg.patience = a.patience;
  cfg.max_iter = a.max_iter;
  cfg.seed = a.seed;

  const auto t1 = Clock::now();
  const crcond::CondenseResult result = crcond::condense(loaded.data, cfg);
  const double condense_ms = ms_since(t1);

  crcond::ModelFile mf;
  mf.model = result.model;
  mf.n_classes = loaded.data.n_classes;
  mf.label_names = loaded.label_names;
  mf.config = cfg;
  mf.best_purity = result.history.best_purity;
  mf.best_iteration = result.history.best_iteration;

  const auto t2 = Clock::now();
  crcond::write_model(a.out_model, mf);
  crcond::write_trace_csv(a.out_trace, result.history);
  const double write_ms = ms_since(t2);

  nlohmann::json doc = base_manifest("condense", argv);
  doc["config"] = {{"k_per_class", a.k_per_class},
                   {"step_scale", cfg.step_scale},
                   {"patience", cfg.patience},
                   {"max_iter", cfg.max_iter}};
  doc["seeds"] = {{"seed", cfg.seed}};
  doc["inputs"] = {{"in_path", a.in_path}};
  doc["outputs"] = {{"out_model", a.out_model}, {"out_trace", a.out_trace}};
  doc["timings_ms"] = {{"load", load_ms}, {"condense", condense_ms}, {"write", write_ms}};
  doc["metrics"] = {{"n_centers", result.model.centers.rows()},
                    {"best_purity", result.history.best_purity},
                    {"best_iteration", result.history.best_iteration},
                    {"iterations", result.history.purity_trace.size() - 1}};
  doc["label_names"] = loaded.label_names;
  write_manifest(a.out_model, doc);

  std::cout << "wrote " << a.out_model << " (" << result.model.centers.rows()
            << " centers, best purity "
            << crcond::format_double(result.history.best_purity) << ")\n";
  return 0;
}

struct EvaluateArgs {
  std::string model_path;
  std::string train_mode = "condensed";
  std::string data_path;
  std::string test_path;
  std::string report_path;
  crcond::TrainConfig train;
};

void check_feature_dim(Index model_dims, Index data_dims, const std::string& path) {
  if (model_dims != data_dims) {
    throw std::runtime_error("model expects " + std::to_string(model_dims) +
                             " features but " + path + " has " +
                             std::to_string(data_dims));
  }
}

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& argv) {
  if (a.train_mode == "raw" && a.data_path.empty()) {
    throw std::runtime_error("--data-path is required with --train-mode raw");
  }

  const auto t0 = Clock::now();
  const crcond::ModelFile mf = crcond::read_model(a.model_path);
  const crcond::LoadedDataset test =
      crcond::read_csv_with_mapping(a.test_path, mf.label_names);
  check_feature_dim(mf.model.centers.cols(), test.data.instances.cols(), a.test_path);
  const double load_ms = ms_since(t0);

  const auto t1 = Clock::now();
  const double nearest_acc = crcond::accuracy(
      crcond::nearest_center_predict(mf.model, test.data.instances),
      test.data.labels);

  // MLP on the condensed set: the model's label space, not just the classes
  // that survived condensation.
  crcond::Dataset cond =
      crcond::make_dataset(mf.model.centers, mf.model.center_labels);
  cond.n_classes = mf.n_classes;
  const crcond::MLPModel mlp_cond = crcond::mlp_train(cond, a.train);
  const double cond_acc = crcond::accuracy(
      crcond::mlp_predict(mlp_cond, test.data.instances), test.data.labels);
  double train_ms = ms_since(t1);

  nlohmann::json report = {{"train_mode", a.train_mode},
                           {"n_test", test.data.instances.rows()},
                           {"nearest_center_accuracy", nearest_acc},
                           {"mlp_condensed_accuracy", cond_acc}};
  if (a.train_mode == "raw") {
    const auto t2 = Clock::now();
    const crcond::LoadedDataset raw =
        crcond::read_csv_with_mapping(a.data_path, mf.label_names);
    check_feature_dim(mf.model.centers.cols(), raw.data.instances.cols(), a.data_path);
    const crcond::MLPModel mlp_raw = crcond::mlp_train(raw.data, a.train);
    const double raw_acc = crcond::accuracy(
        crcond::mlp_predict(mlp_raw, test.data.instances), test.data.labels);
    train_ms += ms_since(t2);
    report["mlp_raw_accuracy"] = raw_acc;
    report["condensed_minus_raw"] = cond_acc - raw_acc;
  }

  const auto t3 = Clock::now();
  crcond::write_text_file(a.report_path, report.dump(2) + "\n");
  const double write_ms = ms_since(t3);

  nlohmann::json doc = base_manifest("evaluate", argv);
  doc["config"] = {{"train_mode", a.train_mode},
                   {"epochs", a.train.epochs},
                   {"batch_size", a.train.batch_size},
                   {"learning_rate", a.train.learning_rate},
                   {"momentum", a.train.momentum},
                   {"hidden", a.train.hidden}};
  doc["seeds"] = {{"seed", a.train.seed}};
  doc["inputs"] = {{"model_path", a.model_path}, {"test_path", a.test_path}};
  if (!a.data_path.empty()) doc["inputs"]["data_path"] = a.data_path;
  doc["outputs"] = {{"report_path", a.report_path}};
  doc["timings_ms"] = {{"load", load_ms}, {"train", train_ms}, {"write", write_ms}};
  doc["metrics"] = report;
  doc["label_names"] = mf.label_names;
  write_manifest(a.report_path, doc);

  std::cout << report.dump(2) << "\n";
  return 0;
}

struct PlotArgs {
  std::string data_path;
  std::string model_path;
  std::string out_svg;
};

int cmd_plot(const PlotArgs& a, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  std::string svg;
  std::vector<std::string> label_names;
  Index rows = 0;
  Index centers = 0;
  if (!a.model_path.empty()) {
    const crcond::ModelFile mf = crcond::read_model(a.model_path);
    const crcond::LoadedDataset loaded =
        crcond::read_csv_with_mapping(a.data_path, mf.label_names);
    check_feature_dim(mf.model.centers.cols(), loaded.data.instances.cols(),
                      a.data_path);
    rows = loaded.data.instances.rows();
    centers = mf.model.centers.rows();
    label_names = mf.label_names;
    svg = crcond::render_scatter_svg(loaded.data.instances, loaded.data.labels,
                                     &mf.model.centers, &mf.model.center_labels);
  } else {
    const crcond::LoadedDataset loaded = crcond::read_csv(a.data_path);
    rows = loaded.data.instances.rows();
    label_names = loaded.label_names;
    svg = crcond::render_scatter_svg(loaded.data.instances, loaded.data.labels);
  }
  const double render_ms = ms_since(t0);

  const auto t1 = Clock::now();
  crcond::write_text_file(a.out_svg, svg);
  const double write_ms = ms_since(t1);

  nlohmann::json doc = base_manifest("plot", argv);
  doc["config"] = nlohmann::json::object();
  doc["seeds"] = nlohmann::json::object();
  doc["inputs"] = {{"data_path", a.data_path}};
  if (!a.model_path.empty()) doc["inputs"]["model_path"] = a.model_path;
  doc["outputs"] = {{"out_svg", a.out_svg}};
  doc["timings_ms"] = {{"render", render_ms}, {"write", write_ms}};
  doc["metrics"] = {{"instances", rows}, {"centers", centers}};
  doc["label_names"] = label_names;
  write_manifest(a.out_svg, doc);

  std::cout << "wrote " << a.out_svg << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> raw_argv(argv, argv + argc);

  CLI::App app{"Condense labeled datasets into labeled centers, then evaluate and plot"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic labeled CSV dataset");
  generate->add_option("--family", gen.family, "Dataset family")
      ->required()
      ->check(CLI::IsMember({"circles", "moons"}));
  generate->add_option("--preset", gen.preset, "Noise preset")
      ->check(CLI::IsMember({"clear", "touching", "noisy"}));
  generate->add_option("--noise-std", gen.noise_std,
                       "Gaussian noise std; overrides --preset")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--n", gen.n, "Total instance count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "Noise seed");
  generate->add_option("--factor", gen.factor, "Inner/outer radius ratio (circles)");
  generate->add_option("--out-path", gen.out_path, "Output CSV path")->required();

  CondenseArgs con;
  auto* condense = app.add_subcommand("condense", "Condense a CSV dataset into labeled centers");
  condense->add_option("--in-path", con.in_path, "Input CSV path")->required();
  condense
      ->add_option("--k-per-class", con.k_per_class,
                   "Centers per class, in class order (comma-separated)")
      ->required()
      ->delimiter(',');
  condense->add_option("--step-scale", con.step_scale, "Advancement step multiplier");
  condense->add_option("--patience", con.patience,
                       "Non-improving iterations tolerated before stopping");
  condense->add_option("--max-iter", con.max_iter, "Refinement iteration cap");
  condense->add_option("--seed", con.seed, "Initialization seed");
  condense->add_option("--out-model", con.out_model, "Output model path")->required();
  condense->add_option("--out-trace", con.out_trace, "Output purity trace CSV path")
      ->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Compare classifiers trained on condensed vs raw data");
  evaluate->add_option("--model-path", ev.model_path, "Model file path")->required();
  evaluate->add_option("--train-mode", ev.train_mode, "condensed: MLP on centers only; raw: also MLP on --data-path")
      ->check(CLI::IsMember({"condensed", "raw"}));
  evaluate->add_option("--data-path", ev.data_path,
                       "Raw training CSV (required with --train-mode raw)");
  evaluate->add_option("--test-path", ev.test_path, "Test CSV path")->required();
  evaluate->add_option("--report-path", ev.report_path, "Output report path")->required();
  evaluate->add_option("--epochs", ev.train.epochs, "Training epochs");
  evaluate->add_option("--batch-size", ev.train.batch_size, "Minibatch size");
  evaluate->add_option("--learning-rate", ev.train.learning_rate, "SGD learning rate");
  evaluate->add_option("--momentum", ev.train.momentum, "SGD momentum");
  evaluate->add_option("--hidden", ev.train.hidden, "Hidden layer width");
  evaluate->add_option("--seed", ev.train.seed, "Training seed");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render a dataset (and optionally a model) as SVG");
  plot_cmd->add_option("--data-path", plot.data_path, "Input CSV path")->required();
  plot_cmd->add_option("--model-path", plot.model_path, "Model file to overplot");
  plot_cmd->add_option("--out-svg", plot.out_svg, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, raw_argv);
    if (condense->parsed()) return cmd_condense(con, raw_argv);
    if (evaluate->parsed()) return cmd_evaluate(ev, raw_argv);
    return cmd_plot(plot, raw_argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
