#include <doctest.h>

#include <cmath>

#include "nepdf/model_io.hpp"
#include "nepdf/net.hpp"
#include "nepdf/rng.hpp"

using namespace nepdf;

namespace {

//! Trivially separable toy NEPDFs: mass in the top-left corner for label 1,
//! bottom-right for label -1.
void separable_dataset(int n, int k, std::uint64_t seed,
                       std::vector<Matrix<float>>& inputs,
                       std::vector<int>& labels) {
  Rng rng(seed);
  inputs.clear();
  labels.clear();
  for (int i = 0; i < n; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    Matrix<float> m = Matrix<float>::Zero(k, k);
    const int r0 = label == 1 ? 0 : k - 4;
    for (int r = r0; r < r0 + 4; ++r)
      for (int c = r0; c < r0 + 4; ++c)
        m(r, c) = static_cast<float>(rng.uniform(0.2, 1.0));
    m /= m.maxCoeff();
    inputs.push_back(std::move(m));
    labels.push_back(label);
  }
}

TrainConfig quick_config(int epochs, int patience = 0) {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.momentum = 0.9;
  cfg.batch_size = 16;
  cfg.epochs = epochs;
  cfg.validation_fraction = 0.2;
  cfg.early_stop_patience = patience;
  cfg.seed = 1234;
  return cfg;
}

const std::string kToyArch = "conv:8,pool,dense:16";

}  // namespace

TEST_CASE("training separates the toy dataset within 10 epochs") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(200, 16, 77, inputs, labels);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 5);
  train(net, inputs, labels, quick_config(10));

  const Matrix<float> probs = forward(net, inputs);
  int hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int pred = probs(static_cast<Eigen::Index>(i), 0) >= 0.5f ? 1 : -1;
    hits += pred == labels[i];
  }
  CHECK(static_cast<double>(hits) / static_cast<double>(labels.size()) >=
        0.99);
}

TEST_CASE("held-out accuracy on the toy dataset") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(250, 16, 78, inputs, labels);
  // 80/20 split: the tail 50 samples stay unseen
  std::vector<Matrix<float>> train_in(inputs.begin(), inputs.begin() + 200);
  std::vector<int> train_lab(labels.begin(), labels.begin() + 200);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 6);
  train(net, train_in, train_lab, quick_config(10));

  int hits = 0;
  for (std::size_t i = 200; i < inputs.size(); ++i) {
    NepdfMatrix m;
    m.values = inputs[i].cast<double>();
    m.normalized = true;
    const auto pred = predict(net, m);
    hits += pred.label == labels[i];
    // argmax of the returned probabilities matches the returned label
    Eigen::Index am = 0;
    pred.probabilities.maxCoeff(&am);
    CHECK(class_index_to_label(static_cast<int>(am), 2) == pred.label);
  }
  CHECK(static_cast<double>(hits) / 50.0 >= 0.95);
}

TEST_CASE("training is deterministic given the seed") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(64, 16, 79, inputs, labels);
  auto net_a = init_network<float>(16, 2, parse_arch(kToyArch), 9);
  auto net_b = init_network<float>(16, 2, parse_arch(kToyArch), 9);
  train(net_a, inputs, labels, quick_config(3));
  train(net_b, inputs, labels, quick_config(3));
  CHECK(serialize_model(net_a, 0) == serialize_model(net_b, 0));
}

TEST_CASE("patience zero runs exactly the configured epoch count") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(40, 16, 80, inputs, labels);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 9);
  const TrainResult result = train(net, inputs, labels, quick_config(7, 0));
  CHECK(result.history.size() == 7);
  for (std::size_t e = 0; e < result.history.size(); ++e)
    CHECK(result.history[e].epoch == static_cast<int>(e) + 1);
}

TEST_CASE("early stopping restores the best validation parameters") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(60, 16, 81, inputs, labels);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 10);
  TrainConfig cfg = quick_config(30, 2);
  const TrainResult result = train(net, inputs, labels, cfg);
  CHECK(result.best_epoch >= 1);
  CHECK(result.history.size() <= 30);
}

TEST_CASE("loss does not increase over the first epoch at lr 1e-3") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(120, 16, 82, inputs, labels);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 11);
  const double before = loss(forward(net, inputs), labels);
  TrainConfig cfg = quick_config(1);
  cfg.learning_rate = 1e-3;
  train(net, inputs, labels, cfg);
  const double after = loss(forward(net, inputs), labels);
  CHECK(after <= before);
}

TEST_CASE("training errors") {
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 12);
  std::vector<Matrix<float>> empty;
  CHECK_THROWS_AS(train(net, empty, {}, quick_config(1)), EmptyDataset);

  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(4, 16, 83, inputs, labels);
  labels[0] = 0;  // not representable by a 2-class net
  CHECK_THROWS_AS(train(net, inputs, labels, quick_config(1)),
                  LabelOutOfRange);
}

TEST_CASE("predict agrees with batched forward") {
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(10, 16, 84, inputs, labels);
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 13);
  train(net, inputs, labels, quick_config(2));
  const Matrix<float> probs = forward(net, inputs);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    NepdfMatrix m;
    m.values = inputs[i].cast<double>();
    m.normalized = true;
    const auto pred = predict(net, m);
    for (int c = 0; c < 2; ++c)
      CHECK(pred.probabilities(c) == probs(static_cast<Eigen::Index>(i), c));
  }
}

TEST_CASE("transpose-consistent test sets evaluate identically either way") {
  // every (m, l) has its (m^T, -l) twin present, so accuracy over the set
  // equals accuracy over the swapped view exactly
  std::vector<Matrix<float>> inputs;
  std::vector<int> labels;
  separable_dataset(40, 16, 85, inputs, labels);
  std::vector<Matrix<float>> augmented;
  std::vector<int> aug_labels;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    augmented.push_back(inputs[i]);
    aug_labels.push_back(labels[i]);
    augmented.push_back(inputs[i].transpose());
    aug_labels.push_back(-labels[i]);
  }
  auto net = init_network<float>(16, 2, parse_arch(kToyArch), 14);
  train(net, augmented, aug_labels, quick_config(3));

  auto accuracy = [&](const std::vector<Matrix<float>>& in,
                      const std::vector<int>& lab) {
    const Matrix<float> probs = forward(net, in);
    int hits = 0;
    for (std::size_t i = 0; i < lab.size(); ++i)
      hits += (probs(static_cast<Eigen::Index>(i), 0) >= 0.5f ? 1 : -1) ==
              lab[i];
    return static_cast<double>(hits) / static_cast<double>(lab.size());
  };
  std::vector<Matrix<float>> swapped;
  std::vector<int> swapped_labels;
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    swapped.push_back(augmented[i].transpose());
    swapped_labels.push_back(-aug_labels[i]);
  }
  CHECK(accuracy(augmented, aug_labels) ==
        accuracy(swapped, swapped_labels));
}
