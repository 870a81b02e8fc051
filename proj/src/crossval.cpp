#include "nepdf/crossval.hpp"

#include <unordered_map>

#include "nepdf/error.hpp"
#include "nepdf/rng.hpp"

namespace nepdf {

std::vector<FoldSplit> kfold_split(const std::vector<std::string>& group_keys,
                                   int k, std::uint64_t seed) {
  if (k < 2) throw InvalidParams("kfold_split: k must be at least 2");

  // Unique groups in first-appearance order, so the shuffle below is the
  // only source of randomness.
  std::unordered_map<std::string, int> group_of;
  std::vector<std::vector<int>> members;
  for (std::size_t i = 0; i < group_keys.size(); ++i) {
    auto [it, inserted] = group_of.try_emplace(
        group_keys[i], static_cast<int>(members.size()));
    if (inserted) members.emplace_back();
    members[static_cast<std::size_t>(it->second)].push_back(
        static_cast<int>(i));
  }
  const auto n_groups = static_cast<int>(members.size());
  if (n_groups < k)
    throw TooFewGroups("kfold_split: " + std::to_string(n_groups) +
                       " groups cannot fill " + std::to_string(k) + " folds");

  std::vector<int> order(members.size());
  for (int g = 0; g < n_groups; ++g) order[static_cast<std::size_t>(g)] = g;
  Rng rng(seed);
  rng.shuffle(order);

  // Contiguous slices of the shuffled group list; the first n_groups % k
  // folds get one extra group.
  std::vector<int> fold_of_group(members.size());
  const int base = n_groups / k;
  const int extra = n_groups % k;
  int cursor = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    for (int j = 0; j < size; ++j)
      fold_of_group[static_cast<std::size_t>(order[static_cast<std::size_t>(cursor++)])] = f;
  }

  std::vector<FoldSplit> folds(static_cast<std::size_t>(k));
  for (int g = 0; g < n_groups; ++g) {
    const int f = fold_of_group[static_cast<std::size_t>(g)];
    for (int idx : members[static_cast<std::size_t>(g)]) {
      for (int other = 0; other < k; ++other) {
        auto& fold = folds[static_cast<std::size_t>(other)];
        (other == f ? fold.test : fold.train).push_back(idx);
      }
    }
  }
  return folds;
}

}  // namespace nepdf
