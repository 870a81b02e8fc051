#include "nepdf/config.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nepdf/error.hpp"

namespace nepdf {

using nlohmann::json;

const char* eval_mode_name(EvalMode m) {
  switch (m) {
    case EvalMode::kThreeClass:
      return "three-class";
    case EvalMode::kChalearn:
      return "chalearn";
    case EvalMode::kBinary:
      return "binary";
  }
  return "?";
}

EvalMode parse_eval_mode(const std::string& name) {
  if (name == "three-class" || name == "three_class")
    return EvalMode::kThreeClass;
  if (name == "chalearn") return EvalMode::kChalearn;
  if (name == "binary") return EvalMode::kBinary;
  throw ConfigError("eval.mode must be three-class, chalearn or binary, got '" +
                    name + "'");
}

SemParams RunConfig::sem_params(std::uint64_t system_seed) const {
  if (!simulate) throw ConfigError("no simulate section configured");
  SemParams p;
  p.structure = simulate->structure;
  p.alpha = simulate->alpha;
  p.beta = simulate->beta;
  p.gamma = simulate->gamma;
  p.steps = simulate->steps;
  p.burn_in = simulate->burn_in;
  p.seed = system_seed;
  return p;
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

double get_number(const json& obj, const char* key, double fallback,
                  const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    throw ConfigError(where + "." + key + " must be a number");
  return obj.at(key).get<double>();
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  require_keys(doc, "config",
               {"seed", "output_dir", "data", "simulate", "synth", "nepdf",
                "net", "eval", "benchmark"});
  RunConfig cfg;
  cfg.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");
  cfg.output_dir = get_or<std::string>(doc, "output_dir", ".", "config");

  int sources = 0;
  if (doc.contains("data")) {
    const auto& d = doc.at("data");
    require_keys(d, "data", {"path"});
    DataConfig dc;
    dc.path = get_or<std::string>(d, "path", "", "data");
    if (dc.path.empty()) throw ConfigError("data.path must be set");
    cfg.data = dc;
    ++sources;
  }
  if (doc.contains("simulate")) {
    const auto& s = doc.at("simulate");
    require_keys(s, "simulate",
                 {"structure", "alpha", "beta", "gamma", "systems", "steps",
                  "lag", "burn_in"});
    SimulateConfig sc;
    sc.structure = parse_structure(
        get_or<std::string>(s, "structure", "v", "simulate"));
    sc.alpha = get_number(s, "alpha", sc.alpha, "simulate");
    sc.beta = get_number(s, "beta", sc.beta, "simulate");
    sc.gamma = get_number(s, "gamma", sc.gamma, "simulate");
    sc.systems = get_or<int>(s, "systems", sc.systems, "simulate");
    sc.steps = get_or<int>(s, "steps", sc.steps, "simulate");
    sc.lag = get_or<int>(s, "lag", 0, "simulate");
    sc.burn_in = get_or<int>(s, "burn_in", 0, "simulate");
    if (sc.systems < 1) throw ConfigError("simulate.systems must be positive");
    if (sc.lag < 0) throw ConfigError("simulate.lag must be nonnegative");
    cfg.simulate = sc;
    ++sources;
  }
  if (doc.contains("synth")) {
    const auto& s = doc.at("synth");
    require_keys(s, "synth", {"n"});
    SynthConfig sc;
    sc.n = get_or<int>(s, "n", sc.n, "synth");
    if (sc.n < 1) throw ConfigError("synth.n must be positive");
    cfg.synth = sc;
    ++sources;
  }
  if (sources > 1)
    throw ConfigError("config must name at most one of data, simulate, synth");

  if (doc.contains("nepdf")) {
    const auto& n = doc.at("nepdf");
    require_keys(n, "nepdf", {"k", "log_space", "log_transform"});
    cfg.nepdf.k = get_or<int>(n, "k", cfg.nepdf.k, "nepdf");
    cfg.nepdf.log_space =
        get_or<bool>(n, "log_space", cfg.nepdf.log_space, "nepdf");
    cfg.nepdf.log_transform =
        get_or<bool>(n, "log_transform", cfg.nepdf.log_transform, "nepdf");
    if (cfg.nepdf.k < 2) throw ConfigError("nepdf.k must be at least 2");
  }
  if (doc.contains("net")) {
    const auto& n = doc.at("net");
    require_keys(n, "net",
                 {"arch", "learning_rate", "momentum", "batch_size", "epochs",
                  "validation_fraction", "patience"});
    cfg.net.arch = get_or<std::string>(n, "arch", cfg.net.arch, "net");
    parse_arch(cfg.net.arch);  // fail fast on malformed text
    auto& t = cfg.net.train;
    t.learning_rate = get_number(n, "learning_rate", t.learning_rate, "net");
    t.momentum = get_number(n, "momentum", t.momentum, "net");
    t.batch_size = get_or<int>(n, "batch_size", t.batch_size, "net");
    t.epochs = get_or<int>(n, "epochs", t.epochs, "net");
    t.validation_fraction =
        get_number(n, "validation_fraction", t.validation_fraction, "net");
    t.early_stop_patience =
        get_or<int>(n, "patience", t.early_stop_patience, "net");
    t.validate();
  }
  if (doc.contains("eval")) {
    const auto& e = doc.at("eval");
    require_keys(e, "eval", {"folds", "mode"});
    cfg.eval.folds = get_or<int>(e, "folds", cfg.eval.folds, "eval");
    cfg.eval.mode = parse_eval_mode(get_or<std::string>(
        e, "mode", eval_mode_name(cfg.eval.mode), "eval"));
    if (cfg.eval.folds < 2) throw ConfigError("eval.folds must be at least 2");
  }
  if (doc.contains("benchmark")) {
    const auto& b = doc.at("benchmark");
    require_keys(b, "benchmark", {"grid"});
    if (!b.contains("grid") || !b.at("grid").is_array() ||
        b.at("grid").empty())
      throw ConfigError("benchmark.grid must be a nonempty array");
    BenchmarkConfig bc;
    for (const auto& cell : b.at("grid")) {
      require_keys(cell, "benchmark.grid[]", {"alpha", "beta", "gamma"});
      GridCell gc;
      gc.alpha = get_number(cell, "alpha", gc.alpha, "benchmark.grid[]");
      gc.beta = get_number(cell, "beta", gc.beta, "benchmark.grid[]");
      gc.gamma = get_number(cell, "gamma", gc.gamma, "benchmark.grid[]");
      bc.grid.push_back(gc);
    }
    cfg.benchmark = bc;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc);
}

json canonical_json(const RunConfig& cfg) {
  json doc;
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  if (cfg.data) doc["data"] = {{"path", cfg.data->path}};
  if (cfg.simulate) {
    const auto& s = *cfg.simulate;
    doc["simulate"] = {
        {"structure", structure_name(s.structure)},
        {"alpha", s.alpha},
        {"beta", s.beta},
        {"gamma", s.gamma},
        {"systems", s.systems},
        {"steps", s.steps},
        {"lag", s.lag},
        {"burn_in", s.burn_in},
    };
  }
  if (cfg.synth) doc["synth"] = {{"n", cfg.synth->n}};
  doc["nepdf"] = {
      {"k", cfg.nepdf.k},
      {"log_space", cfg.nepdf.log_space},
      {"log_transform", cfg.nepdf.log_transform},
  };
  doc["net"] = {
      {"arch", cfg.net.arch},
      {"learning_rate", cfg.net.train.learning_rate},
      {"momentum", cfg.net.train.momentum},
      {"batch_size", cfg.net.train.batch_size},
      {"epochs", cfg.net.train.epochs},
      {"validation_fraction", cfg.net.train.validation_fraction},
      {"patience", cfg.net.train.early_stop_patience},
  };
  doc["eval"] = {
      {"folds", cfg.eval.folds},
      {"mode", eval_mode_name(cfg.eval.mode)},
  };
  if (cfg.benchmark) {
    json grid = json::array();
    for (const auto& cell : cfg.benchmark->grid)
      grid.push_back({{"alpha", cell.alpha},
                      {"beta", cell.beta},
                      {"gamma", cell.gamma}});
    doc["benchmark"] = {{"grid", grid}};
  }
  return doc;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t config_digest(const RunConfig& cfg) {
  return fnv1a64(canonical_json(cfg).dump());
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace nepdf
