#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nepdf/report.hpp"

using namespace nepdf;
namespace fs = std::filesystem;

TEST_CASE("aggregate is exactly the mean of the folds") {
  const std::vector<FoldMetrics> folds = {
      {0, 0.9, 0.8, 0.7}, {1, 0.7, 0.6, 0.5}, {2, 0.8, 0.7, 0.6}};
  const AggregateMetrics agg = aggregate_folds(folds);
  CHECK(agg.mean_auroc == (0.9 + 0.7 + 0.8) / 3.0);
  CHECK(agg.mean_accuracy == (0.8 + 0.6 + 0.7) / 3.0);
  CHECK(agg.mean_weighted_accuracy == (0.7 + 0.5 + 0.6) / 3.0);
  CHECK(agg.std_auroc == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("single-fold aggregates have zero spread") {
  const AggregateMetrics agg = aggregate_folds({{0, 0.5, 0.5, 0.5}});
  CHECK(agg.mean_auroc == 0.5);
  CHECK(agg.std_auroc == 0.0);
}

TEST_CASE("report json carries the published schema") {
  EvalReport report;
  report.config = {{"seed", 1}};
  report.folds = {{0, 0.9, 0.8, 0.8}, {1, 0.7, 0.6, 0.6}};
  report.baselines["pearson"] = {{0, 0.5, 0, 0}, {1, 0.5, 0, 0}};
  report.baselines["mutual_information"] = {{0, 0.6, 0, 0}, {1, 0.6, 0, 0}};
  report.baselines["bivariate_fit"] = {{0, 0.4, 0, 0}, {1, 0.4, 0, 0}};
  const nlohmann::json doc = report_json(report);

  CHECK(doc.contains("config"));
  REQUIRE(doc.contains("folds"));
  REQUIRE(doc.at("folds").size() == 2);
  CHECK(doc.at("folds")[0].at("fold") == 0);
  CHECK(doc.at("folds")[0].at("auroc") == 0.9);
  CHECK(doc.at("folds")[0].at("accuracy") == 0.8);
  CHECK(doc.at("folds")[0].at("weighted_accuracy") == 0.8);
  REQUIRE(doc.contains("aggregate"));
  CHECK(doc.at("aggregate").at("mean_auroc") == 0.8);
  CHECK(doc.at("aggregate").contains("std_auroc"));
  REQUIRE(doc.contains("baselines"));
  for (const char* name :
       {"pearson", "mutual_information", "bivariate_fit"}) {
    REQUIRE(doc.at("baselines").contains(name));
    CHECK(doc.at("baselines").at(name).contains("aggregate"));
  }
}

TEST_CASE("csv writers produce the documented headers") {
  const auto dir = fs::temp_directory_path();
  const auto scores_path = dir / "nepdf_test_scores.csv";
  write_scores_csv(scores_path, {{"a/xy", 1, 0.9, 0.8, 0.64}}, 0xABCD);
  std::ifstream in(scores_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# nepdf-scores config_digest=000000000000abcd");
  std::getline(in, line);
  CHECK(line == "id,true_label,score_causal,y_ind,y_pred");
  std::getline(in, line);
  CHECK(line == "a/xy,1,0.9,0.8,0.64");
  fs::remove(scores_path);

  const auto hist_path = dir / "nepdf_test_history.csv";
  write_history_csv(hist_path, {{1, 0.5, 0.4, 0.9}}, 1);
  std::ifstream hin(hist_path);
  std::getline(hin, line);
  CHECK(line == "# nepdf-history config_digest=0000000000000001");
  std::getline(hin, line);
  CHECK(line == "epoch,train_loss,val_loss,val_accuracy");
  std::getline(hin, line);
  CHECK(line == "1,0.5,0.4,0.9");
  fs::remove(hist_path);
}
