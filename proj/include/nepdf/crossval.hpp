#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nepdf {

struct FoldSplit {
  std::vector<int> train;
  std::vector<int> test;
};

//! k (train, test) index partitions. Entries sharing a group key always land
//! in the same fold, which keeps a pair, its transpose twin and siblings from
//! one simulated system together. Folds are a seeded shuffle of the groups
//! with sizes within one group of each other.
std::vector<FoldSplit> kfold_split(const std::vector<std::string>& group_keys,
                                   int k, std::uint64_t seed);

}  // namespace nepdf
