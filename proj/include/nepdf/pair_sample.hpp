#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nepdf {

//! One labeled variable pair: n joint observations of (x, y).
//! label 1 means x -> y, -1 means y -> x, 0 means independent.
struct PairSample {
  std::string id;
  std::vector<double> x;
  std::vector<double> y;
  int label = 0;
  double weight = 1.0;

  std::size_t n_obs() const { return x.size(); }
};

void validate_label(int label);

//! Pairwise deletion: keeps only positions where both values are present and
//! finite, preserving order. Throws LengthMismatch on unequal inputs and
//! EmptyPair when nothing survives.
std::pair<std::vector<double>, std::vector<double>> clean_pair(
    const std::vector<std::optional<double>>& raw_x,
    const std::vector<std::optional<double>>& raw_y);

//! (y, x) view of a pair; id, label and weight are left untouched.
PairSample swap_pair(const PairSample& p);

//! Group key for fold assignment: everything before the first '/'. A pair,
//! its transpose twin ("<id>/t") and siblings from the same simulated system
//! ("<system>/xy", ...) share one key.
std::string base_id(const std::string& id);

}  // namespace nepdf
