#pragma once

#include <string>
#include <vector>

#include "nepdf/net.hpp"

namespace nepdf {

struct GradCheckEntry {
  int layer_index = 0;
  std::string layer;
  std::string param;  // "weights" or "bias"
  double max_rel_err = 0.0;
  long count = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;  // one row per parameter array
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

//! Relative error with a small floor so that near-zero gradient pairs are
//! compared absolutely: |a - n| / max(|a|, |n|, 1e-4).
double gradcheck_relative_error(double analytic, double numeric);

//! Compares analytic gradients against central finite differences
//! (loss(theta + h) - loss(theta - h)) / 2h for every parameter entry.
//! corrupt_layer >= 0 perturbs that layer's analytic weight gradient first
//! (test hook for verifying that the checker catches errors).
GradCheckReport gradient_check(const Network<double>& net,
                               const std::vector<Matrix<double>>& batch,
                               const std::vector<int>& labels,
                               double step = 1e-4, double tolerance = 1e-4,
                               int corrupt_layer = -1);

//! Smallest distance to a ReLU or max-pool decision boundary along the
//! forward pass: min over |pre-activation| and pool top-2 gaps.
double kink_margin(const Network<double>& net, const Matrix<double>& image);

//! Random inputs in [0.05, 1] redrawn until every sample clears the margin,
//! so finite differences never step across an activation kink.
std::vector<Matrix<double>> make_gradcheck_batch(const Network<double>& net,
                                                 int batch_size,
                                                 std::uint64_t seed,
                                                 double min_margin = 1e-3);

//! The acceptance-style check: one conv, one pool, one dense layer over an
//! 8x8 input, run entirely in double precision.
GradCheckReport run_gradcheck(std::uint64_t seed, int corrupt_layer = -1);

}  // namespace nepdf
