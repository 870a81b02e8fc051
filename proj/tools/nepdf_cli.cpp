#include <fcntl.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nepdf/config.hpp"
#include "nepdf/dataset_io.hpp"
#include "nepdf/gradcheck.hpp"
#include "nepdf/model_io.hpp"
#include "nepdf/pipeline.hpp"
#include "nepdf/report.hpp"

namespace fs = std::filesystem;
using namespace nepdf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

//! Exclusive lock on an output directory; concurrent invocations must not
//! share one.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fs::create_directories(dir);
    path_ = dir / ".nepdf.lock";
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw IoError("output directory locked by " + path_.string() +
                    " (remove the file if it is stale)");
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

RunConfig base_config(const CommonFlags& common) {
  RunConfig cfg;
  if (!common.config_path.empty()) cfg = load_run_config(common.config_path);
  if (common.seed) cfg.seed = *common.seed;
  return cfg;
}

void print_label_counts(const PairDataset& ds) {
  std::map<int, std::size_t> counts;
  for (const auto& p : ds.pairs) ++counts[p.label];
  std::cout << "pairs: " << ds.pairs.size();
  for (const auto& [label, count] : counts)
    std::cout << "  label " << label << ": " << count;
  std::cout << "\n";
}

TrainedModels load_models(const fs::path& model_path, EvalMode mode) {
  TrainedModels models;
  models.mode = mode;
  auto load_one = [](const fs::path& p) {
    if (!fs::exists(p))
      throw IoError("missing model file: " + p.string());
    return load_model<float>(p);
  };
  if (mode == EvalMode::kChalearn) {
    models.primary = load_one(model_path.string() + ".causal");
    models.ind = load_one(model_path.string() + ".ind");
  } else {
    models.primary = load_one(model_path);
  }
  return models;
}

void check_model_k(const TrainedModels& models, const RunConfig& cfg) {
  const int model_k = models.primary->input_size;
  if (model_k != cfg.nepdf.k)
    throw Error("model was trained with K=" + std::to_string(model_k) +
                " but the configuration sets K=" +
                std::to_string(cfg.nepdf.k) + "; pass --k " +
                std::to_string(model_k));
  const int expect_classes = cfg.eval.mode == EvalMode::kThreeClass ? 3 : 2;
  if (models.primary->n_classes != expect_classes)
    throw Error("model has " + std::to_string(models.primary->n_classes) +
                " classes but mode " + eval_mode_name(cfg.eval.mode) +
                " expects " + std::to_string(expect_classes));
}

std::string grid_cell_name(const RunConfig& cfg, const GridCell& cell) {
  std::string name = "report_a" + format_double(cell.alpha) + "_b" +
                     format_double(cell.beta);
  if (cfg.simulate && cfg.simulate->structure != Structure::kV)
    name += "_g" + format_double(cell.gamma);
  return name;
}

void print_report_summary(const EvalReport& report) {
  const AggregateMetrics agg = aggregate_folds(report.folds);
  std::cout << "folds: " << report.folds.size()
            << "  mean auroc: " << agg.mean_auroc
            << "  mean accuracy: " << agg.mean_accuracy
            << "  mean weighted accuracy: " << agg.mean_weighted_accuracy
            << "\n";
}

int run_simulate(const CommonFlags& common, const SimulateConfig& flags,
                 const std::vector<bool>& set, const std::string& out) {
  RunConfig cfg = base_config(common);
  SimulateConfig sim = cfg.simulate.value_or(SimulateConfig{});
  if (set[0]) sim.structure = flags.structure;
  if (set[1]) sim.alpha = flags.alpha;
  if (set[2]) sim.beta = flags.beta;
  if (set[3]) sim.gamma = flags.gamma;
  if (set[4]) sim.systems = flags.systems;
  if (set[5]) sim.steps = flags.steps;
  if (set[6]) sim.lag = flags.lag;
  if (set[7]) sim.burn_in = flags.burn_in;
  cfg.simulate = sim;
  cfg.data.reset();
  cfg.synth.reset();
  cfg.sem_params(0).validate();  // fail fast before any generation

  const PairDataset ds = generate_pairs(cfg);
  write_dataset(out, ds);
  std::cout << "wrote " << out << "\n";
  print_label_counts(ds);
  return kExitOk;
}

int run_synth(const CommonFlags& common, int n, bool n_set,
              const std::string& out) {
  RunConfig cfg = base_config(common);
  SynthConfig sc = cfg.synth.value_or(SynthConfig{});
  if (n_set) sc.n = n;
  cfg.synth = sc;
  cfg.data.reset();
  cfg.simulate.reset();

  const PairDataset ds = generate_pairs(cfg);
  write_dataset(out, ds);
  std::cout << "wrote " << out << "\n";
  print_label_counts(ds);
  return kExitOk;
}

struct NetOverrides {
  std::string arch;
  double learning_rate = 0;
  int epochs = 0;
  int batch_size = 0;
  int k = 0;
  std::string mode;
  std::string data;
};

void apply_overrides(RunConfig& cfg, const NetOverrides& o) {
  if (!o.arch.empty()) {
    parse_arch(o.arch);
    cfg.net.arch = o.arch;
  }
  if (o.learning_rate > 0) cfg.net.train.learning_rate = o.learning_rate;
  if (o.epochs > 0) cfg.net.train.epochs = o.epochs;
  if (o.batch_size > 0) cfg.net.train.batch_size = o.batch_size;
  if (o.k > 0) cfg.nepdf.k = o.k;
  if (!o.mode.empty()) cfg.eval.mode = parse_eval_mode(o.mode);
  if (!o.data.empty()) {
    cfg.data = DataConfig{o.data};
    cfg.simulate.reset();
    cfg.synth.reset();
  }
}

int run_train(const CommonFlags& common, const NetOverrides& overrides,
              const std::string& model_out) {
  RunConfig cfg = base_config(common);
  apply_overrides(cfg, overrides);
  const std::uint64_t digest = config_digest(cfg);

  const fs::path out_path(model_out);
  DirLock lock(out_path.parent_path().empty() ? "."
                                              : out_path.parent_path());

  const PairDataset ds = generate_pairs(cfg);
  const BuiltDataset built = build_dataset(ds, cfg.nepdf, /*augment=*/true);
  std::vector<int> all(built.size());
  for (std::size_t i = 0; i < built.size(); ++i) all[i] = static_cast<int>(i);
  const TrainedModels models =
      train_models(built, all, cfg.eval.mode, cfg.net, cfg.nepdf.k,
                   derive_seed(cfg.seed, 0x7EA1));

  if (cfg.eval.mode == EvalMode::kChalearn) {
    save_model(*models.primary, model_out + ".causal", digest);
    save_model(*models.ind, model_out + ".ind", digest);
    write_history_csv(model_out + ".causal.history.csv",
                      models.primary_result.history, digest);
    write_history_csv(model_out + ".ind.history.csv",
                      models.ind_result.history, digest);
    std::cout << "wrote " << model_out << ".causal and " << model_out
              << ".ind\n";
  } else {
    save_model(*models.primary, model_out, digest);
    write_history_csv(model_out + ".history.csv",
                      models.primary_result.history, digest);
    std::cout << "wrote " << model_out << "\n";
  }
  std::cout << "entries: " << built.size()
            << "  epochs run: " << models.primary_result.history.size()
            << "\n";
  return kExitOk;
}

int run_eval(const CommonFlags& common, const NetOverrides& overrides,
             const std::string& model_path, const std::string& data_path,
             const std::string& out_dir) {
  RunConfig cfg = base_config(common);
  apply_overrides(cfg, overrides);
  cfg.data = DataConfig{data_path};
  cfg.simulate.reset();
  cfg.synth.reset();

  const TrainedModels models = load_models(model_path, cfg.eval.mode);
  check_model_k(models, cfg);

  DirLock lock(out_dir);
  const PairDataset ds = read_dataset(data_path);
  const EvalReport report =
      evaluate_dataset(models, ds, cfg, /*augment=*/false);
  write_report(fs::path(out_dir) / "report.json", report);
  write_scores_csv(fs::path(out_dir) / "scores.csv", report.scores,
                   config_digest(cfg));
  print_report_summary(report);
  bool weighted = false;
  for (const auto& p : ds.pairs) weighted |= p.weight != 1.0;
  if (weighted)
    std::cout << "weighted accuracy uses the per-pair weights "
                 "(Tuebingen-protocol reference for this method family: "
                 "0.784; no pass/fail gate)\n";
  std::cout << "wrote " << (fs::path(out_dir) / "report.json").string()
            << " and scores.csv\n";
  return kExitOk;
}

int run_benchmark_cmd(const CommonFlags& common, const NetOverrides& overrides,
                      const std::string& out_dir) {
  RunConfig cfg = base_config(common);
  apply_overrides(cfg, overrides);
  DirLock lock(out_dir);

  std::vector<std::pair<std::string, RunConfig>> cells;
  if (cfg.benchmark && cfg.simulate) {
    for (const GridCell& cell : cfg.benchmark->grid) {
      RunConfig cell_cfg = cfg;
      cell_cfg.simulate->alpha = cell.alpha;
      cell_cfg.simulate->beta = cell.beta;
      cell_cfg.simulate->gamma = cell.gamma;
      cells.emplace_back(grid_cell_name(cfg, cell), cell_cfg);
    }
  } else {
    cells.emplace_back("report", cfg);
  }
  for (auto& [name, cell_cfg] : cells) {
    const EvalReport report = run_benchmark(cell_cfg);
    write_report(fs::path(out_dir) / (name + ".json"), report);
    write_scores_csv(fs::path(out_dir) / (name + "_scores.csv"),
                     report.scores, config_digest(cell_cfg));
    std::cout << name << ": ";
    print_report_summary(report);
  }
  return kExitOk;
}

int run_gradcheck_cmd(std::uint64_t seed, int corrupt_layer) {
  const GradCheckReport report = run_gradcheck(seed, corrupt_layer);
  std::printf("%-10s %-8s %10s %12s\n", "layer", "param", "entries",
              "max rel err");
  for (const auto& e : report.entries)
    std::printf("%-10s %-8s %10ld %12.3e\n", e.layer.c_str(), e.param.c_str(),
                e.count, e.max_rel_err);
  std::printf("tolerance %.1e: %s (max %.3e)\n", report.tolerance,
              report.passed ? "PASS" : "FAIL", report.max_rel_err);
  if (!report.passed) {
    for (const auto& e : report.entries)
      if (e.max_rel_err >= report.tolerance)
        std::printf("gradient mismatch in layer %s (%s)\n", e.layer.c_str(),
                    e.param.c_str());
  }
  return report.passed ? kExitOk : kExitRuntime;
}

int run_convert(const std::string& pairs_dir,
                const std::vector<std::string>& pair_files,
                const std::string& meta_path, int forward_label,
                const std::string& out) {
  if (forward_label != 1 && forward_label != -1)
    throw ConfigError("--forward-label must be 1 or -1");
  std::ifstream meta(meta_path);
  if (!meta) throw IoError("cannot open: " + meta_path);

  std::map<std::string, fs::path> available;
  for (const auto& f : pair_files) available[fs::path(f).filename()] = f;
  if (!pairs_dir.empty())
    for (const auto& entry : fs::directory_iterator(pairs_dir))
      if (entry.is_regular_file())
        available[entry.path().filename()] = entry.path();

  PairDataset ds;
  std::string digest_input = "convert forward_label=" +
                             std::to_string(forward_label);
  std::string name;
  int direction;
  double weight;
  while (meta >> name >> direction >> weight) {
    const auto it = available.find(name);
    if (it == available.end())
      throw IoError("pair file named in metadata not found: " + name);
    std::ifstream in(it->second);
    if (!in) throw IoError("cannot open: " + it->second.string());
    std::vector<std::optional<double>> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string a, b;
      if (!(row >> a >> b)) continue;
      auto parse_opt = [](const std::string& t) -> std::optional<double> {
        try {
          const double v = parse_double(t);
          if (!std::isfinite(v)) return std::nullopt;
          return v;
        } catch (const Error&) {
          return std::nullopt;
        }
      };
      xs.push_back(parse_opt(a));
      ys.push_back(parse_opt(b));
    }
    PairSample p;
    p.id = fs::path(name).stem();
    std::tie(p.x, p.y) = clean_pair(xs, ys);
    if (direction == 0)
      p.label = 0;
    else if (direction == 1)
      p.label = forward_label;
    else if (direction == -1)
      p.label = -forward_label;
    else
      throw ConfigError("metadata direction must be 1, -1 or 0 for " + name);
    p.weight = weight;
    ds.pairs.push_back(std::move(p));
    digest_input += "\n" + name + " " + std::to_string(direction) + " " +
                    format_double(weight);
  }
  if (ds.pairs.empty()) throw Error("metadata listed no pairs");
  ds.config_digest = fnv1a64(digest_input);
  write_dataset(out, ds);
  std::cout << "wrote " << out << " (" << ds.pairs.size() << " pairs)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nepdf: pairwise causal direction classification from joint-density "
      "images"};
  app.require_subcommand(1);

  CommonFlags common;
  NetOverrides overrides;
  SimulateConfig sim_flags;
  std::string out_file, out_dir, model_path, data_path;
  std::string pairs_dir, meta_path;
  std::vector<std::string> pair_files;
  int synth_n = 0, corrupt_layer = -1, forward_label = -1;
  std::uint64_t gradcheck_seed = 7;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path,
                    "JSON run configuration (flags override it)");
    cmd->add_option("--seed", common.seed, "master random seed");
  };
  auto add_net_flags = [&](CLI::App* cmd) {
    cmd->add_option("--k", overrides.k, "NEPDF side length");
    cmd->add_option("--arch", overrides.arch,
                    "network stack, e.g. conv:16,conv:16,pool,dense:64");
    cmd->add_option("--epochs", overrides.epochs, "training epochs");
    cmd->add_option("--lr", overrides.learning_rate, "SGD learning rate");
    cmd->add_option("--batch", overrides.batch_size, "minibatch size");
    cmd->add_option("--mode", overrides.mode,
                    "three-class, chalearn or binary");
  };

  auto* simulate = app.add_subcommand(
      "simulate", "generate labeled pairs from a three-variable system");
  add_common(simulate);
  std::string structure_name_flag;
  auto* s_structure = simulate->add_option("--structure", structure_name_flag,
                                           "v, chain or reverse-v");
  auto* s_alpha = simulate->add_option("--alpha", sim_flags.alpha);
  auto* s_beta = simulate->add_option("--beta", sim_flags.beta);
  auto* s_gamma = simulate->add_option("--gamma", sim_flags.gamma);
  auto* s_systems =
      simulate->add_option("--systems", sim_flags.systems, "system count");
  auto* s_steps =
      simulate->add_option("--steps", sim_flags.steps, "time steps T");
  auto* s_lag = simulate->add_option("--lag", sim_flags.lag,
                                     "pair (a_{t-lag}, b_t) instead of "
                                     "contemporaneous tuples");
  auto* s_burn = simulate->add_option("--burn-in", sim_flags.burn_in,
                                      "leading steps to discard");
  simulate->add_option("--out", out_file, "dataset file")->required();

  auto* synth = app.add_subcommand(
      "synth", "generate spline-mechanism cause-effect pairs");
  add_common(synth);
  auto* synth_n_opt = synth->add_option("--n", synth_n, "sample count");
  synth->add_option("--out", out_file, "dataset file")->required();

  auto* train = app.add_subcommand("train", "build NEPDFs and fit the model");
  add_common(train);
  add_net_flags(train);
  train->add_option("--data", overrides.data, "dataset file (overrides config)");
  train->add_option("--model-out", model_path, "model output path")
      ->required();

  auto* eval = app.add_subcommand("eval", "score a dataset with a model");
  add_common(eval);
  add_net_flags(eval);
  eval->add_option("--model", model_path, "model path (chalearn mode loads "
                                          "<path>.causal and <path>.ind)")
      ->required();
  eval->add_option("--data", data_path, "dataset file")->required();
  eval->add_option("--out", out_dir, "output directory")->required();

  auto* benchmark = app.add_subcommand(
      "benchmark", "cross-validated protocol over a parameter grid");
  add_common(benchmark);
  add_net_flags(benchmark);
  benchmark->add_option("--out", out_dir, "output directory")->required();

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "compare analytic gradients with finite differences");
  gradcheck->add_option("--seed", gradcheck_seed, "probe seed");
  gradcheck
      ->add_option("--corrupt-layer", corrupt_layer,
                   "perturb this layer's analytic gradient (test hook)")
      ->group("");

  auto* convert = app.add_subcommand(
      "convert", "ingest two-column pair files plus a metadata table");
  convert->add_option("--pairs-dir", pairs_dir, "directory of pair files");
  convert->add_option("--pairs", pair_files, "individual pair files");
  convert->add_option("--meta", meta_path,
                      "lines: <file> <direction 1|-1|0> <weight>")
      ->required();
  convert->add_option("--forward-label", forward_label,
                      "dataset label for direction 1 (default -1, matching "
                      "the synthetic training convention)");
  convert->add_option("--out", out_file, "dataset file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      std::vector<bool> set = {
          s_structure->count() > 0, s_alpha->count() > 0,
          s_beta->count() > 0,      s_gamma->count() > 0,
          s_systems->count() > 0,   s_steps->count() > 0,
          s_lag->count() > 0,       s_burn->count() > 0};
      if (s_structure->count() > 0)
        sim_flags.structure = parse_structure(structure_name_flag);
      return run_simulate(common, sim_flags, set, out_file);
    }
    if (synth->parsed())
      return run_synth(common, synth_n, synth_n_opt->count() > 0, out_file);
    if (train->parsed()) return run_train(common, overrides, model_path);
    if (eval->parsed())
      return run_eval(common, overrides, model_path, data_path, out_dir);
    if (benchmark->parsed())
      return run_benchmark_cmd(common, overrides, out_dir);
    if (gradcheck->parsed())
      return run_gradcheck_cmd(gradcheck_seed, corrupt_layer);
    if (convert->parsed())
      return run_convert(pairs_dir, pair_files, meta_path, forward_label,
                         out_file);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
