#include <doctest.h>

#include <nlohmann/json.hpp>

#include "nepdf/config.hpp"
#include "nepdf/error.hpp"

using namespace nepdf;
using nlohmann::json;

TEST_CASE("full config parses with every section") {
  const json doc = json::parse(R"({
    "seed": 42,
    "output_dir": "out",
    "simulate": {"structure": "chain", "alpha": 0.1, "beta": 0.2,
                 "gamma": 0.5, "systems": 10, "steps": 100},
    "nepdf": {"k": 8, "log_space": false, "log_transform": true},
    "net": {"arch": "conv:4,pool,dense:8", "learning_rate": 0.02,
            "momentum": 0.8, "batch_size": 16, "epochs": 3,
            "validation_fraction": 0.2, "patience": 2},
    "eval": {"folds": 3, "mode": "three-class"},
    "benchmark": {"grid": [{"alpha": 0.1, "beta": 0.1, "gamma": 0.1},
                            {"alpha": 0.5, "beta": 0.5, "gamma": 0.5}]}
  })");
  const RunConfig cfg = parse_run_config(doc);
  CHECK(cfg.seed == 42);
  CHECK(cfg.simulate->structure == Structure::kChain);
  CHECK(cfg.simulate->gamma == 0.5);
  CHECK(cfg.nepdf.k == 8);
  CHECK(cfg.nepdf.log_transform);
  CHECK(cfg.net.train.epochs == 3);
  CHECK(cfg.eval.folds == 3);
  REQUIRE(cfg.benchmark);
  CHECK(cfg.benchmark->grid.size() == 2);

  const SemParams p = cfg.sem_params(7);
  CHECK(p.alpha == 0.1);
  CHECK(p.seed == 7);
}

TEST_CASE("defaults survive an empty document") {
  const RunConfig cfg = parse_run_config(json::object());
  CHECK(cfg.seed == 0);
  CHECK(cfg.nepdf.k == 16);
  CHECK(cfg.net.arch == "default");
  CHECK(cfg.net.train.learning_rate == 0.01);
  CHECK(cfg.net.train.momentum == 0.9);
  CHECK(cfg.net.train.batch_size == 32);
  CHECK(cfg.net.train.epochs == 30);
  CHECK(cfg.net.train.early_stop_patience == 5);
  CHECK(cfg.eval.folds == 5);
  CHECK(cfg.eval.mode == EvalMode::kThreeClass);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"sneed": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"nepdf": {"bins": 16}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"net": {"dropout": 0.5}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(
          R"({"benchmark": {"grid": [{"alpha": 1, "delta": 2}]}})")),
      ConfigError);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(parse_run_config(json::parse(
                      R"({"data": {"path": "a"}, "synth": {"n": 5}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"eval": {"mode": "banana"}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"nepdf": {"k": 1}})")), ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"net": {"epochs": 0}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"net": {"arch": "wat:3"}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"eval": {"folds": 1}})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config(json::parse(R"({"simulate": {"systems": 0}})")),
      ConfigError);
}

TEST_CASE("digest is stable and sensitive") {
  const json doc = json::parse(
      R"({"seed": 1, "synth": {"n": 10}, "nepdf": {"k": 8}})");
  const RunConfig a = parse_run_config(doc);
  const RunConfig b = parse_run_config(doc);
  CHECK(config_digest(a) == config_digest(b));
  RunConfig c = a;
  c.nepdf.k = 16;
  CHECK(config_digest(a) != config_digest(c));
  RunConfig d = a;
  d.seed = 2;
  CHECK(config_digest(a) != config_digest(d));
}

TEST_CASE("canonical json carries the effective defaults") {
  const RunConfig cfg = parse_run_config(json::object());
  const json canon = canonical_json(cfg);
  CHECK(canon.at("nepdf").at("k") == 16);
  CHECK(canon.at("net").at("momentum") == 0.9);
  CHECK(canon.at("eval").at("mode") == "three-class");
  CHECK(canon.at("seed") == 0);
}

TEST_CASE("arch strings round-trip") {
  const auto arch = parse_arch("conv:16,conv:16,pool,dense:64");
  CHECK(format_arch(arch) == "conv:16,conv:16,pool,flatten,dense:64");
  CHECK(parse_arch("default").size() == default_arch().size());
  CHECK(arch.back().kind == LayerKind::kOutput);
}
