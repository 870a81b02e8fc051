#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nepdf/net.hpp"
#include "nepdf/sem.hpp"
#include "nepdf/synth.hpp"

namespace nepdf {

enum class EvalMode { kThreeClass, kChalearn, kBinary };

const char* eval_mode_name(EvalMode m);
EvalMode parse_eval_mode(const std::string& name);

struct DataConfig {
  std::string path;
};

struct SimulateConfig {
  Structure structure = Structure::kV;
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  int systems = 100;
  int steps = 1000;
  int lag = 0;
  int burn_in = 0;
};

struct SynthConfig {
  int n = 1000;
};

struct NepdfConfig {
  int k = 16;
  bool log_space = false;
  bool log_transform = false;
};

struct NetConfig {
  std::string arch = "default";
  TrainConfig train;
};

struct EvalConfig {
  int folds = 5;
  EvalMode mode = EvalMode::kThreeClass;
};

struct GridCell {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
};

struct BenchmarkConfig {
  std::vector<GridCell> grid;
};

//! Full run configuration. All hyperparameters live here; CLI flags override
//! individual fields. Validation rejects unknown keys before any work starts.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::optional<DataConfig> data;
  std::optional<SimulateConfig> simulate;
  std::optional<SynthConfig> synth;
  NepdfConfig nepdf;
  NetConfig net;
  EvalConfig eval;
  std::optional<BenchmarkConfig> benchmark;

  //! The configured SEM parameters with a given seed plugged in.
  SemParams sem_params(std::uint64_t system_seed) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

//! Canonical snapshot with every default filled in; key order is sorted, so
//! the dump (and therefore the digest) is stable.
nlohmann::json canonical_json(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);
std::uint64_t config_digest(const RunConfig& cfg);

std::string digest_hex(std::uint64_t digest);

}  // namespace nepdf
