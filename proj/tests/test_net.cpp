#include <doctest.h>

#include <cmath>

#include "nepdf/net.hpp"
#include "nepdf/rng.hpp"

using namespace nepdf;

namespace {

std::vector<Matrix<float>> random_batch(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix<float>> batch;
  for (int i = 0; i < n; ++i) {
    Matrix<float> m(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c)
        m(r, c) = static_cast<float>(rng.uniform());
    batch.push_back(std::move(m));
  }
  return batch;
}

}  // namespace

TEST_CASE("default architecture chains 16 -> 16 -> 8 -> 8 -> 4") {
  const auto net = init_network<float>(16, 3, {}, 1);
  REQUIRE(net.layers.size() == 9);
  CHECK(net.layers[0].out_shape.height == 16);
  CHECK(net.layers[0].out_shape.channels == 16);
  CHECK(net.layers[2].out_shape.height == 8);
  CHECK(net.layers[3].out_shape.channels == 32);
  CHECK(net.layers[5].out_shape.height == 4);
  CHECK(net.layers[6].out_shape.channels == 32 * 4 * 4);
  CHECK(net.layers[7].out_shape.channels == 64);
  CHECK(net.layers[8].out_shape.channels == 3);
  CHECK(net.layers[8].name == "output");

  const auto batch = random_batch(2, 16, 3);
  const Matrix<float> probs = forward(net, batch);
  CHECK(probs.rows() == 2);
  CHECK(probs.cols() == 3);
}

TEST_CASE("identical seeds give identical parameters") {
  const auto a = init_network<float>(16, 3, {}, 42);
  const auto b = init_network<float>(16, 3, {}, 42);
  const auto c = init_network<float>(16, 3, {}, 43);
  bool all_equal = true;
  bool any_differs = false;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    all_equal &= a.layers[l].weights == b.layers[l].weights;
    any_differs |= a.layers[l].weights != c.layers[l].weights;
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("bad architectures are rejected") {
  CHECK_THROWS_AS(init_network<float>(2, 3, {}, 1), BadArchitecture);
  CHECK_THROWS_AS(init_network<float>(16, 4, {}, 1), BadArchitecture);
  // three pools starting from 4 would pool a 1-pixel map
  const std::vector<LayerSpec> too_deep = {
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kFlatten, 0, Activation::kNone},
      {LayerKind::kOutput, 0, Activation::kNone},
  };
  CHECK_THROWS_AS(init_network<float>(4, 3, too_deep, 1), BadArchitecture);
  // dense before flatten
  const std::vector<LayerSpec> no_flatten = {
      {LayerKind::kDense, 8, Activation::kRelu},
      {LayerKind::kOutput, 0, Activation::kNone},
  };
  CHECK_THROWS_AS(init_network<float>(8, 2, no_flatten, 1), BadArchitecture);
}

TEST_CASE("softmax rows sum to one") {
  const auto net = init_network<float>(8, 3, parse_arch("conv:4,pool,dense:8"),
                                       7);
  const auto batch = random_batch(5, 8, 11);
  const Matrix<float> probs = forward(net, batch);
  for (int i = 0; i < probs.rows(); ++i) {
    CHECK(std::abs(probs.row(i).sum() - 1.0f) <= 1e-6f);
    for (int c = 0; c < probs.cols(); ++c) CHECK(probs(i, c) > 0.0f);
  }
}

TEST_CASE("softmax rows sum to one within 1e-9 at double precision") {
  const auto net = init_network<double>(8, 3,
                                        parse_arch("conv:4,pool,dense:8"), 7);
  Rng rng(29);
  std::vector<Matrix<double>> batch;
  for (int i = 0; i < 5; ++i) {
    Matrix<double> m(8, 8);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) m(r, c) = rng.uniform();
    batch.push_back(std::move(m));
  }
  const Matrix<double> probs = forward(net, batch);
  for (int i = 0; i < probs.rows(); ++i)
    CHECK(std::abs(probs.row(i).sum() - 1.0) <= 1e-9);
}

TEST_CASE("two-class output is a logistic pair") {
  const auto net = init_network<float>(8, 2, parse_arch("conv:4,pool,dense:8"),
                                       7);
  const auto batch = random_batch(4, 8, 13);
  const Matrix<float> probs = forward(net, batch);
  CHECK(probs.cols() == 2);
  for (int i = 0; i < probs.rows(); ++i)
    CHECK(probs(i, 0) + probs(i, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero weights give uniform probabilities") {
  auto net = init_network<float>(8, 3, parse_arch("conv:4,pool,dense:8"), 7);
  for (auto& layer : net.layers) layer.weights.setZero();
  Matrix<float> zeros = Matrix<float>::Zero(8, 8);
  const Matrix<float> probs = forward(net, {zeros});
  for (int c = 0; c < 3; ++c)
    CHECK(probs(0, c) == doctest::Approx(1.0 / 3).epsilon(1e-7));
}

TEST_CASE("forward is deterministic") {
  const auto net = init_network<float>(8, 3, parse_arch("conv:4,pool,dense:8"),
                                       19);
  const auto batch = random_batch(6, 8, 23);
  const Matrix<float> a = forward(net, batch);
  const Matrix<float> b = forward(net, batch);
  CHECK(a == b);
}

TEST_CASE("shape mismatch is rejected") {
  const auto net = init_network<float>(8, 3, parse_arch("conv:4,pool,dense:8"),
                                       19);
  CHECK_THROWS_AS(forward(net, random_batch(1, 9, 1)), ShapeMismatch);
}

TEST_CASE("cross-entropy loss") {
  Matrix<float> probs(2, 3);
  probs << 1.0f, 0.0f, 0.0f,  // exact hit for label 1 (index 0)
      1.0f / 3, 1.0f / 3, 1.0f / 3;

  SUBCASE("one-hot hit costs zero") {
    Matrix<float> one(1, 3);
    one << 1.0f, 0.0f, 0.0f;
    CHECK(loss(one, std::vector<int>{1}) == 0.0);
  }
  SUBCASE("uniform prediction costs ln 3") {
    Matrix<float> uni(1, 3);
    uni.setConstant(1.0f / 3);
    CHECK(loss(uni, std::vector<int>{0}) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-6));
  }
  SUBCASE("batch loss is the mean of the per-sample losses") {
    const double l0 = loss(Matrix<float>(probs.row(0)), std::vector<int>{1});
    const double l1 = loss(Matrix<float>(probs.row(1)), std::vector<int>{-1});
    CHECK(loss(probs, std::vector<int>{1, -1}) ==
          doctest::Approx((l0 + l1) / 2).epsilon(1e-12));
  }
  SUBCASE("one-hot matrix form agrees") {
    Matrix<float> onehot = Matrix<float>::Zero(2, 3);
    onehot(0, 0) = 1.0f;
    onehot(1, 1) = 1.0f;
    CHECK(loss_onehot(probs, onehot) ==
          doctest::Approx(loss(probs, std::vector<int>{1, -1}))
              .epsilon(1e-12));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(loss(probs, std::vector<int>{1}), ShapeMismatch);
  }
}

TEST_CASE("gradient of a duplicated batch equals the single-batch gradient") {
  const auto net = init_network<double>(8, 3,
                                        parse_arch("conv:3,pool,dense:6"), 5);
  Rng rng(9);
  Matrix<double> img(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) img(r, c) = rng.uniform();
  const auto single = backward(net, {img}, std::vector<int>{1});
  const auto doubled =
      backward(net, {img, img}, std::vector<int>{1, 1});
  for (std::size_t l = 0; l < single.weights.size(); ++l) {
    CHECK(single.weights[l] == doubled.weights[l]);
    CHECK(single.bias[l] == doubled.bias[l]);
  }
}

TEST_CASE("zero input zeroes the convolution weight gradients") {
  auto net = init_network<double>(8, 3,
                                  parse_arch("conv:3,pool,dense:6"), 5);
  // positive biases keep the ReLU open so gradient still reaches the biases
  net.layers[0].bias.setConstant(0.5);
  Matrix<double> zeros = Matrix<double>::Zero(8, 8);
  const auto grads = backward(net, {zeros}, std::vector<int>{1});
  CHECK(grads.weights[0].cwiseAbs().maxCoeff() == 0.0);  // no input signal
  CHECK(grads.bias[0].cwiseAbs().maxCoeff() > 0.0);      // bias path fires
}
