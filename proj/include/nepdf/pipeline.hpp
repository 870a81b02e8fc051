#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nepdf/config.hpp"
#include "nepdf/dataset_io.hpp"
#include "nepdf/histogram.hpp"
#include "nepdf/net.hpp"
#include "nepdf/report.hpp"

namespace nepdf {

//! NEPDF inputs ready for the network, parallel arrays over entries.
struct BuiltDataset {
  int k = 16;
  std::vector<MatrixXf> inputs;  // K x K, normalized to [0, 1]
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<double> weights;
  std::vector<int> source;      // index into the originating PairDataset
  std::vector<bool> swapped;    // transpose twin of its source pair

  std::size_t size() const { return inputs.size(); }
};

//! Builds one NEPDF per pair; with augment, the transposed twin with negated
//! label follows each entry (id suffix "/t").
BuiltDataset build_dataset(const PairDataset& ds, const NepdfConfig& cfg,
                           bool augment);

//! Dataset from the configured source: simulated systems (6 pairs each,
//! per-system derived seeds), synthetic spline pairs, or a file.
PairDataset generate_pairs(const RunConfig& cfg);

//! One or two trained networks, depending on the mode.
struct TrainedModels {
  EvalMode mode = EvalMode::kThreeClass;
  std::optional<Network<float>> primary;  // 3-class or causal/reverse net
  std::optional<Network<float>> ind;      // dependent/independent net
  TrainResult primary_result;
  TrainResult ind_result;
};

//! Trains on the listed entries. three-class: one softmax net over all
//! entries; binary: one logistic net (labels must be +-1); chalearn: a
//! causal/reverse net on the +-1 subset plus a dependent/independent net on
//! everything.
TrainedModels train_models(const BuiltDataset& built,
                           const std::vector<int>& indices, EvalMode mode,
                           const NetConfig& net_cfg, int k,
                           std::uint64_t seed);

//! Per-entry scores. score_causal is the probability of the "x causes y"
//! direction, y_ind the dependence belief, y_pred their ChaLearn combination.
//! In three-class mode score_causal renormalizes the two directional
//! probabilities and y_ind = 1 - P(independent).
struct EntryScores {
  std::vector<double> score_causal;
  std::vector<double> y_ind;
  std::vector<double> y_pred;
  std::vector<int> predicted;
  Matrix<double> class_probs;  // N x n_classes raw network outputs
};

EntryScores score_entries(const TrainedModels& models,
                          const BuiltDataset& built,
                          const std::vector<int>& indices);

//! auroc column: mean one-vs-rest AUROC (three-class), plain AUROC on the
//! forward direction (binary) or bidirectional AUROC on y_pred (chalearn).
FoldMetrics metrics_for(EvalMode mode, const EntryScores& scores,
                        const std::vector<int>& labels,
                        const std::vector<double>& weights, int fold);

//! Classical reference methods evaluated on the same test entries: scores
//! from Pearson correlation, the histogram mutual information and the
//! bivariate regression fit, pushed through the mode's AUROC definition.
std::map<std::string, FoldMetrics> baseline_metrics_for(
    EvalMode mode, const PairDataset& ds, const BuiltDataset& built,
    const std::vector<int>& indices, int nepdf_k, int fold);

//! Full protocol: generate -> NEPDF (with transpose augmentation) -> k-fold
//! CV grouped by base id -> train -> score -> metrics + baselines.
EvalReport run_benchmark(const RunConfig& cfg);

//! Whole-dataset evaluation with already-trained models (single fold 0).
EvalReport evaluate_dataset(const TrainedModels& models, const PairDataset& ds,
                            const RunConfig& cfg, bool augment);

}  // namespace nepdf
