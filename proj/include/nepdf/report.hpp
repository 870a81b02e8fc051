#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nepdf/net.hpp"

namespace nepdf {

struct FoldMetrics {
  int fold = 0;
  double auroc = 0.0;
  double accuracy = 0.0;
  double weighted_accuracy = 0.0;
};

struct AggregateMetrics {
  double mean_auroc = 0.0;
  double std_auroc = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_weighted_accuracy = 0.0;
  double std_weighted_accuracy = 0.0;
};

//! Mean plus sample standard deviation (0 for a single fold).
AggregateMetrics aggregate_folds(const std::vector<FoldMetrics>& folds);

struct ScoreRow {
  std::string id;
  int true_label = 0;
  double score_causal = 0.0;
  double y_ind = 0.0;
  double y_pred = 0.0;
};

struct EvalReport {
  nlohmann::json config;  // canonical snapshot with digests
  std::vector<FoldMetrics> folds;
  std::map<std::string, std::vector<FoldMetrics>> baselines;
  std::vector<ScoreRow> scores;
};

nlohmann::json report_json(const EvalReport& report);

void write_report(const std::filesystem::path& path, const EvalReport& report);

//! Header `id,true_label,score_causal,y_ind,y_pred` behind a digest comment.
void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreRow>& rows,
                      std::uint64_t config_digest);

//! Header `epoch,train_loss,val_loss,val_accuracy`.
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<EpochStats>& history,
                       std::uint64_t config_digest);

}  // namespace nepdf
