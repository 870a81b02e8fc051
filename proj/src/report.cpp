#include "nepdf/report.hpp"

#include <cmath>
#include <fstream>

#include "nepdf/config.hpp"
#include "nepdf/dataset_io.hpp"
#include "nepdf/error.hpp"

namespace nepdf {

AggregateMetrics aggregate_folds(const std::vector<FoldMetrics>& folds) {
  AggregateMetrics agg;
  if (folds.empty()) return agg;
  const auto n = static_cast<double>(folds.size());
  for (const auto& f : folds) {
    agg.mean_auroc += f.auroc;
    agg.mean_accuracy += f.accuracy;
    agg.mean_weighted_accuracy += f.weighted_accuracy;
  }
  agg.mean_auroc /= n;
  agg.mean_accuracy /= n;
  agg.mean_weighted_accuracy /= n;
  if (folds.size() > 1) {
    double va = 0, vc = 0, vw = 0;
    for (const auto& f : folds) {
      va += (f.auroc - agg.mean_auroc) * (f.auroc - agg.mean_auroc);
      vc += (f.accuracy - agg.mean_accuracy) * (f.accuracy - agg.mean_accuracy);
      vw += (f.weighted_accuracy - agg.mean_weighted_accuracy) *
            (f.weighted_accuracy - agg.mean_weighted_accuracy);
    }
    agg.std_auroc = std::sqrt(va / (n - 1));
    agg.std_accuracy = std::sqrt(vc / (n - 1));
    agg.std_weighted_accuracy = std::sqrt(vw / (n - 1));
  }
  return agg;
}

namespace {

nlohmann::json folds_json(const std::vector<FoldMetrics>& folds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : folds)
    arr.push_back({{"fold", f.fold},
                   {"auroc", f.auroc},
                   {"accuracy", f.accuracy},
                   {"weighted_accuracy", f.weighted_accuracy}});
  return arr;
}

nlohmann::json aggregate_json(const AggregateMetrics& a) {
  return {{"mean_auroc", a.mean_auroc},
          {"std_auroc", a.std_auroc},
          {"mean_accuracy", a.mean_accuracy},
          {"std_accuracy", a.std_accuracy},
          {"mean_weighted_accuracy", a.mean_weighted_accuracy},
          {"std_weighted_accuracy", a.std_weighted_accuracy}};
}

}  // namespace

nlohmann::json report_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["config"] = report.config;
  doc["folds"] = folds_json(report.folds);
  doc["aggregate"] = aggregate_json(aggregate_folds(report.folds));
  nlohmann::json baselines = nlohmann::json::object();
  for (const auto& [name, folds] : report.baselines)
    baselines[name] = {{"folds", folds_json(folds)},
                       {"aggregate", aggregate_json(aggregate_folds(folds))}};
  doc["baselines"] = baselines;
  return doc;
}

void write_report(const std::filesystem::path& path,
                  const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << report_json(report).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreRow>& rows,
                      std::uint64_t config_digest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "# nepdf-scores config_digest=" << digest_hex(config_digest) << '\n';
  out << "id,true_label,score_causal,y_ind,y_pred\n";
  for (const auto& r : rows)
    out << r.id << ',' << r.true_label << ',' << format_double(r.score_causal)
        << ',' << format_double(r.y_ind) << ',' << format_double(r.y_pred)
        << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<EpochStats>& history,
                       std::uint64_t config_digest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "# nepdf-history config_digest=" << digest_hex(config_digest) << '\n';
  out << "epoch,train_loss,val_loss,val_accuracy\n";
  for (const auto& e : history)
    out << e.epoch << ',' << format_double(e.train_loss) << ','
        << format_double(e.val_loss) << ',' << format_double(e.val_accuracy)
        << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace nepdf
