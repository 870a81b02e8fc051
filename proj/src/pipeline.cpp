#include "nepdf/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "nepdf/crossval.hpp"
#include "nepdf/error.hpp"
#include "nepdf/metrics.hpp"
#include "nepdf/parallel.hpp"
#include "nepdf/synth.hpp"

namespace nepdf {

BuiltDataset build_dataset(const PairDataset& ds, const NepdfConfig& cfg,
                           bool augment) {
  if (ds.pairs.empty()) throw EmptyDataset("build_dataset: no pairs");
  const auto n = static_cast<int>(ds.pairs.size());
  const int stride = augment ? 2 : 1;
  BuiltDataset built;
  built.k = cfg.k;
  built.inputs.resize(static_cast<std::size_t>(n * stride));
  built.labels.resize(built.inputs.size());
  built.ids.resize(built.inputs.size());
  built.weights.resize(built.inputs.size());
  built.source.resize(built.inputs.size());
  built.swapped.resize(built.inputs.size());

  parallel_for(n, [&](int i) {
    const auto& pair = ds.pairs[static_cast<std::size_t>(i)];
    validate_label(pair.label);
    const NepdfMatrix m =
        build_nepdf(pair, cfg.k, cfg.log_space, cfg.log_transform);
    const auto base = static_cast<std::size_t>(i * stride);
    built.inputs[base] = m.values.cast<float>();
    built.labels[base] = pair.label;
    built.ids[base] = pair.id;
    built.weights[base] = pair.weight;
    built.source[base] = i;
    built.swapped[base] = false;
    if (augment) {
      built.inputs[base + 1] = transpose_nepdf(m).values.cast<float>();
      built.labels[base + 1] = -pair.label;
      built.ids[base + 1] = pair.id + "/t";
      built.weights[base + 1] = pair.weight;
      built.source[base + 1] = i;
      built.swapped[base + 1] = true;
    }
  });
  return built;
}

PairDataset generate_pairs(const RunConfig& cfg) {
  PairDataset ds;
  ds.config_digest = config_digest(cfg);
  if (cfg.simulate) {
    const auto& sim = *cfg.simulate;
    ds.pairs.reserve(static_cast<std::size_t>(sim.systems) * 6);
    for (int s = 0; s < sim.systems; ++s) {
      SemParams params =
          cfg.sem_params(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
      const TripleSeries ts = simulate(params);
      char prefix[24];
      std::snprintf(prefix, sizeof(prefix), "%s%06d",
                    structure_name(sim.structure), s);
      for (auto& p : label_pairs(ts, prefix, sim.lag))
        ds.pairs.push_back(std::move(p));
    }
  } else if (cfg.synth) {
    SynthPairConfig sc;
    sc.n_samples = cfg.synth->n;
    sc.seed = cfg.seed;
    ds.pairs = gen_synthetic_pairs(sc);
  } else if (cfg.data) {
    PairDataset loaded = read_dataset(cfg.data->path);
    ds.pairs = std::move(loaded.pairs);
  } else {
    throw ConfigError("config needs one of data, simulate or synth");
  }
  return ds;
}

namespace {

//! Training views per mode: the entry subset and its +-1/0 labels.
void mode_training_view(const BuiltDataset& built,
                        const std::vector<int>& indices, EvalMode mode,
                        bool ind_net, std::vector<MatrixXf>& inputs,
                        std::vector<int>& labels) {
  inputs.clear();
  labels.clear();
  for (int idx : indices) {
    const auto u = static_cast<std::size_t>(idx);
    const int label = built.labels[u];
    if (ind_net) {
      inputs.push_back(built.inputs[u]);
      labels.push_back(label == 0 ? -1 : 1);  // dependent first class
      continue;
    }
    switch (mode) {
      case EvalMode::kThreeClass:
        inputs.push_back(built.inputs[u]);
        labels.push_back(label);
        break;
      case EvalMode::kBinary:
        if (label == 0)
          throw LabelOutOfRange(
              "binary mode cannot train on label 0 (pair " + built.ids[u] +
              "); use three-class or chalearn");
        inputs.push_back(built.inputs[u]);
        labels.push_back(label);
        break;
      case EvalMode::kChalearn:
        if (label != 0) {
          inputs.push_back(built.inputs[u]);
          labels.push_back(label);
        }
        break;
    }
  }
}

}  // namespace

TrainedModels train_models(const BuiltDataset& built,
                           const std::vector<int>& indices, EvalMode mode,
                           const NetConfig& net_cfg, int k,
                           std::uint64_t seed) {
  TrainedModels models;
  models.mode = mode;
  const std::vector<LayerSpec> arch = parse_arch(net_cfg.arch);

  std::vector<MatrixXf> inputs;
  std::vector<int> labels;
  mode_training_view(built, indices, mode, false, inputs, labels);
  if (inputs.empty())
    throw EmptyDataset("train_models: no usable training entries");

  const int n_classes = mode == EvalMode::kThreeClass ? 3 : 2;
  TrainConfig tc = net_cfg.train;
  tc.seed = derive_seed(seed, 2);
  Network<float> primary =
      init_network<float>(k, n_classes, arch, derive_seed(seed, 1));
  models.primary_result = train(primary, inputs, labels, tc);
  models.primary = std::move(primary);

  if (mode == EvalMode::kChalearn) {
    mode_training_view(built, indices, mode, true, inputs, labels);
    TrainConfig tci = net_cfg.train;
    tci.seed = derive_seed(seed, 4);
    Network<float> ind =
        init_network<float>(k, 2, arch, derive_seed(seed, 3));
    models.ind_result = train(ind, inputs, labels, tci);
    models.ind = std::move(ind);
  }
  return models;
}

EntryScores score_entries(const TrainedModels& models,
                          const BuiltDataset& built,
                          const std::vector<int>& indices) {
  if (!models.primary) throw EmptyDataset("score_entries: no trained model");
  const auto n = static_cast<int>(indices.size());
  const auto& primary = *models.primary;
  EntryScores s;
  s.score_causal.resize(indices.size());
  s.y_ind.resize(indices.size());
  s.y_pred.resize(indices.size());
  s.predicted.resize(indices.size());
  s.class_probs.resize(n, primary.n_classes);

  parallel_for_chunks(n, [&](int, int begin, int end) {
    Tape<float> tape;
    Tape<float> ind_tape;
    for (int i = begin; i < end; ++i) {
      const auto u =
          static_cast<std::size_t>(indices[static_cast<std::size_t>(i)]);
      const Vector<float> probs =
          forward_sample(primary, built.inputs[u], tape);
      for (int c = 0; c < primary.n_classes; ++c)
        s.class_probs(i, c) = static_cast<double>(probs(c));
      const auto ui = static_cast<std::size_t>(i);
      switch (models.mode) {
        case EvalMode::kThreeClass: {
          const double p_fwd = s.class_probs(i, 0);
          const double p_rev = s.class_probs(i, 1);
          const double p_ind = s.class_probs(i, 2);
          const double dir_mass = p_fwd + p_rev;
          s.score_causal[ui] = dir_mass > 0.0 ? p_fwd / dir_mass : 0.5;
          s.y_ind[ui] = std::clamp(1.0 - p_ind, 0.0, 1.0);
          Eigen::Index am = 0;
          probs.maxCoeff(&am);
          s.predicted[ui] = class_index_to_label(static_cast<int>(am), 3);
          break;
        }
        case EvalMode::kBinary: {
          s.score_causal[ui] = s.class_probs(i, 0);
          s.y_ind[ui] = 1.0;
          s.predicted[ui] = s.class_probs(i, 0) >= 0.5 ? 1 : -1;
          break;
        }
        case EvalMode::kChalearn: {
          s.score_causal[ui] = s.class_probs(i, 0);
          const Vector<float> ind_probs =
              forward_sample(*models.ind, built.inputs[u], ind_tape);
          s.y_ind[ui] = static_cast<double>(ind_probs(0));
          if (s.y_ind[ui] < 0.5)
            s.predicted[ui] = 0;
          else
            s.predicted[ui] = s.score_causal[ui] >= 0.5 ? 1 : -1;
          break;
        }
      }
      s.y_pred[ui] = combine(std::clamp(s.score_causal[ui], 0.0, 1.0),
                             std::clamp(s.y_ind[ui], 0.0, 1.0));
    }
  });
  return s;
}

FoldMetrics metrics_for(EvalMode mode, const EntryScores& scores,
                        const std::vector<int>& labels,
                        const std::vector<double>& weights, int fold) {
  FoldMetrics fm;
  fm.fold = fold;
  switch (mode) {
    case EvalMode::kThreeClass:
      fm.auroc = mean_ovr_auroc(scores.class_probs, labels);
      break;
    case EvalMode::kBinary: {
      std::vector<int> pos(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i)
        pos[i] = labels[i] == 1 ? 1 : 0;
      fm.auroc = auroc(scores.score_causal, pos);
      break;
    }
    case EvalMode::kChalearn:
      fm.auroc = bidirectional_auroc(scores.y_pred, labels);
      break;
  }
  fm.accuracy =
      weighted_accuracy(scores.predicted, labels,
                        std::vector<double>(labels.size(), 1.0));
  fm.weighted_accuracy = weighted_accuracy(scores.predicted, labels, weights);
  return fm;
}

namespace {

struct BaselineScores {
  std::vector<double> direction;   // signed, positive = x -> y
  std::vector<double> dependence;  // larger = more dependent
};

FoldMetrics baseline_fold_metrics(EvalMode mode, const BaselineScores& bs,
                                  const std::vector<int>& labels, int fold) {
  FoldMetrics fm;
  fm.fold = fold;
  switch (mode) {
    case EvalMode::kThreeClass: {
      std::vector<double> neg_dir(bs.direction.size()), neg_dep(bs.direction.size());
      std::vector<int> p1(labels.size()), p2(labels.size()), p3(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        neg_dir[i] = -bs.direction[i];
        neg_dep[i] = -bs.dependence[i];
        p1[i] = labels[i] == 1 ? 1 : 0;
        p2[i] = labels[i] == -1 ? 1 : 0;
        p3[i] = labels[i] == 0 ? 1 : 0;
      }
      fm.auroc = (auroc(bs.direction, p1) + auroc(neg_dir, p2) +
                  auroc(neg_dep, p3)) /
                 3.0;
      break;
    }
    case EvalMode::kBinary: {
      std::vector<int> pos(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i)
        pos[i] = labels[i] == 1 ? 1 : 0;
      fm.auroc = auroc(bs.direction, pos);
      break;
    }
    case EvalMode::kChalearn:
      fm.auroc = bidirectional_auroc(bs.direction, labels);
      break;
  }
  // Accuracy has no natural definition for raw baseline scores; the AUROC
  // column is the comparison the report carries.
  fm.accuracy = 0.0;
  fm.weighted_accuracy = 0.0;
  return fm;
}

}  // namespace

std::map<std::string, FoldMetrics> baseline_metrics_for(
    EvalMode mode, const PairDataset& ds, const BuiltDataset& built,
    const std::vector<int>& indices, int nepdf_k, int fold) {
  const auto n = static_cast<int>(indices.size());
  BaselineScores pc, mi, bf;
  for (auto* b : {&pc, &mi, &bf}) {
    b->direction.resize(indices.size());
    b->dependence.resize(indices.size());
  }
  parallel_for(n, [&](int i) {
    const auto u =
        static_cast<std::size_t>(indices[static_cast<std::size_t>(i)]);
    const auto& src = ds.pairs[static_cast<std::size_t>(built.source[u])];
    const PairSample pair = built.swapped[u] ? swap_pair(src) : src;
    const auto ui = static_cast<std::size_t>(i);
    try {
      const double r = pearson(pair.x, pair.y);
      pc.dependence[ui] = std::abs(r);
    } catch (const Error&) {
      pc.dependence[ui] = 0.0;
    }
    pc.direction[ui] = 0.0;
    try {
      mi.dependence[ui] = mutual_information(build_epdf(pair, nepdf_k, false));
    } catch (const Error&) {
      mi.dependence[ui] = 0.0;
    }
    mi.direction[ui] = 0.0;
    try {
      bf.direction[ui] = bivariate_fit_score(pair);
    } catch (const Error&) {
      bf.direction[ui] = 0.0;
    }
    bf.dependence[ui] = std::abs(bf.direction[ui]);
  });

  std::vector<int> labels(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i)
    labels[i] = built.labels[static_cast<std::size_t>(indices[i])];
  return {
      {"pearson", baseline_fold_metrics(mode, pc, labels, fold)},
      {"mutual_information", baseline_fold_metrics(mode, mi, labels, fold)},
      {"bivariate_fit", baseline_fold_metrics(mode, bf, labels, fold)},
  };
}

EvalReport run_benchmark(const RunConfig& cfg) {
  const PairDataset ds = generate_pairs(cfg);
  const BuiltDataset built = build_dataset(ds, cfg.nepdf, /*augment=*/true);

  std::vector<std::string> groups;
  groups.reserve(built.size());
  for (const auto& id : built.ids) groups.push_back(base_id(id));
  const auto folds =
      kfold_split(groups, cfg.eval.folds, derive_seed(cfg.seed, 0xF01D));

  EvalReport report;
  report.config = canonical_json(cfg);
  report.config["digest"] = digest_hex(config_digest(cfg));
  report.config["dataset_digest"] = digest_hex(dataset_digest(ds));
  report.scores.resize(built.size());

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& split = folds[f];
    const TrainedModels models =
        train_models(built, split.train, cfg.eval.mode, cfg.net, cfg.nepdf.k,
                     derive_seed(cfg.seed, 0xB000 + f));
    const EntryScores scores = score_entries(models, built, split.test);

    std::vector<int> labels(split.test.size());
    std::vector<double> weights(split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      const auto u = static_cast<std::size_t>(split.test[i]);
      labels[i] = built.labels[u];
      weights[i] = built.weights[u];
      report.scores[u] = {built.ids[u], labels[i], scores.score_causal[i],
                          scores.y_ind[i], scores.y_pred[i]};
    }
    report.folds.push_back(metrics_for(cfg.eval.mode, scores, labels, weights,
                                       static_cast<int>(f)));
    for (auto& [name, fm] :
         baseline_metrics_for(cfg.eval.mode, ds, built, split.test,
                              cfg.nepdf.k, static_cast<int>(f)))
      report.baselines[name].push_back(fm);
  }
  return report;
}

EvalReport evaluate_dataset(const TrainedModels& models, const PairDataset& ds,
                            const RunConfig& cfg, bool augment) {
  const BuiltDataset built = build_dataset(ds, cfg.nepdf, augment);
  std::vector<int> indices(built.size());
  for (std::size_t i = 0; i < built.size(); ++i)
    indices[i] = static_cast<int>(i);
  const EntryScores scores = score_entries(models, built, indices);

  EvalReport report;
  report.config = canonical_json(cfg);
  report.config["digest"] = digest_hex(config_digest(cfg));
  report.config["dataset_digest"] = digest_hex(dataset_digest(ds));
  report.folds.push_back(
      metrics_for(models.mode, scores, built.labels, built.weights, 0));
  report.baselines = {};
  report.scores.resize(built.size());
  for (std::size_t i = 0; i < built.size(); ++i)
    report.scores[i] = {built.ids[i], built.labels[i], scores.score_causal[i],
                        scores.y_ind[i], scores.y_pred[i]};
  return report;
}

}  // namespace nepdf
