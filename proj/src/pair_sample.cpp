#include "nepdf/pair_sample.hpp"

#include <cmath>

#include "nepdf/error.hpp"

namespace nepdf {

void validate_label(int label) {
  if (label != 1 && label != -1 && label != 0)
    throw InvalidLabel("label must be 1, -1 or 0, got " +
                       std::to_string(label));
}

std::pair<std::vector<double>, std::vector<double>> clean_pair(
    const std::vector<std::optional<double>>& raw_x,
    const std::vector<std::optional<double>>& raw_y) {
  if (raw_x.size() != raw_y.size())
    throw LengthMismatch("clean_pair: x has " + std::to_string(raw_x.size()) +
                         " entries, y has " + std::to_string(raw_y.size()));
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(raw_x.size());
  y.reserve(raw_y.size());
  for (std::size_t j = 0; j < raw_x.size(); ++j) {
    if (!raw_x[j] || !raw_y[j]) continue;
    if (!std::isfinite(*raw_x[j]) || !std::isfinite(*raw_y[j])) continue;
    x.push_back(*raw_x[j]);
    y.push_back(*raw_y[j]);
  }
  if (x.empty()) throw EmptyPair("clean_pair: no complete observation left");
  return {std::move(x), std::move(y)};
}

PairSample swap_pair(const PairSample& p) {
  PairSample out = p;
  out.x = p.y;
  out.y = p.x;
  return out;
}

std::string base_id(const std::string& id) {
  const auto pos = id.find('/');
  return pos == std::string::npos ? id : id.substr(0, pos);
}

}  // namespace nepdf
