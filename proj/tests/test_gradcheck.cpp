#include <doctest.h>

#include <set>

#include "nepdf/gradcheck.hpp"

using namespace nepdf;

TEST_CASE("the acceptance-shape gradient check passes") {
  const GradCheckReport report = run_gradcheck(7);
  CHECK(report.passed);
  CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("every parameter array is listed exactly once") {
  const GradCheckReport report = run_gradcheck(7);
  // conv1, dense1, output: weights + bias each
  REQUIRE(report.entries.size() == 6);
  std::set<std::string> seen;
  for (const auto& e : report.entries)
    CHECK(seen.insert(e.layer + "/" + e.param).second);
  CHECK(seen.count("conv1/weights") == 1);
  CHECK(seen.count("conv1/bias") == 1);
  CHECK(seen.count("dense1/weights") == 1);
  CHECK(seen.count("dense1/bias") == 1);
  CHECK(seen.count("output/weights") == 1);
  CHECK(seen.count("output/bias") == 1);
}

TEST_CASE("a corrupted gradient fails and names the layer") {
  const GradCheckReport report = run_gradcheck(7, /*corrupt_layer=*/0);
  CHECK_FALSE(report.passed);
  bool conv_flagged = false;
  for (const auto& e : report.entries)
    if (e.max_rel_err >= report.tolerance) {
      CHECK(e.layer == "conv1");
      conv_flagged = true;
    }
  CHECK(conv_flagged);
}

TEST_CASE("a two-class logistic head also checks out") {
  const std::vector<LayerSpec> arch = {
      {LayerKind::kConv3x3, 3, Activation::kRelu},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kFlatten, 0, Activation::kNone},
      {LayerKind::kDense, 6, Activation::kRelu},
      {LayerKind::kOutput, 0, Activation::kNone},
  };
  const auto net = init_network<double>(8, 2, arch, 21);
  const auto batch = make_gradcheck_batch(net, 4, 22);
  const std::vector<int> labels = {1, -1, 1, -1};
  const GradCheckReport report = gradient_check(net, batch, labels);
  CHECK(report.passed);
}

TEST_CASE("deeper stacks with two conv blocks pass as well") {
  const auto net = init_network<double>(
      8, 3, parse_arch("conv:3,conv:3,pool,conv:4,pool,dense:6"), 31);
  const auto batch = make_gradcheck_batch(net, 3, 33);
  const std::vector<int> labels = {1, 0, -1};
  const GradCheckReport report = gradient_check(net, batch, labels);
  CHECK(report.passed);
}
