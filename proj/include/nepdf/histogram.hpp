#pragma once

#include <utility>
#include <vector>

#include "nepdf/pair_sample.hpp"
#include "nepdf/types.hpp"

namespace nepdf {

//! Bin boundaries for both axes of one pair; K bins per axis, K+1 edges.
struct BinGrid {
  std::vector<double> edges_x;
  std::vector<double> edges_y;
  bool log_space = false;

  int bins() const { return static_cast<int>(edges_x.size()) - 1; }
};

//! K x K empirical joint density of one pair. Row index o follows the x axis,
//! column index p the y axis. Before normalization the entries are counts
//! divided by n_obs and sum to 1; after normalization the maximum entry is 1.
struct NepdfMatrix {
  MatrixXd values;
  BinGrid grid;
  std::size_t n_obs = 0;
  bool normalized = false;
};

//! K+1 edges spanning [min, max] of the values, uniform either in raw space
//! or in log space. A degenerate axis (min == max) is widened by
//! max(|v|, 1) * 1e-6 around the value (applied to log(v) in log space, i.e.
//! multiplicatively).
std::vector<double> compute_bin_edges(const std::vector<double>& values, int k,
                                      bool log_space);

//! Bin index for one value: half-open bins [e_o, e_{o+1}) with the last bin
//! closed on the right; values outside the edges clamp into the end bins.
int bin_index(const std::vector<double>& edges, double value);

//! 2D histogram with per-axis data-derived grids, counts divided by n_obs.
NepdfMatrix build_epdf(const PairSample& pair, int k, bool log_space);

//! EPDF, optional elementwise log1p, then division by the maximum entry so
//! the largest value is exactly 1.
NepdfMatrix build_nepdf(const PairSample& pair, int k, bool log_space = false,
                        bool log_transform = false);

//! Transposed values with the grid axes swapped; other fields preserved.
NepdfMatrix transpose_nepdf(const NepdfMatrix& m);

//! For every entry appends its transpose right after it: labels +-1 get the
//! negated label, label 0 twins keep 0. Output has twice the input size.
std::vector<std::pair<NepdfMatrix, int>> augment_with_transposes(
    const std::vector<std::pair<NepdfMatrix, int>>& dataset);

}  // namespace nepdf
