#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nepdf/pair_sample.hpp"

namespace nepdf {

//! A labeled pair collection plus the digest of the configuration that
//! produced it (0 for hand-written files).
struct PairDataset {
  std::vector<PairSample> pairs;
  std::uint64_t config_digest = 0;
};

//! Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

//! Strict double parser; throws ConfigError on trailing garbage.
double parse_double(const std::string& text);

//! CSV layout: optional leading '#' metadata lines, then the header
//! `id,label,weight,x,y`. x and y are space-separated decimal lists of equal
//! length; label is 1, -1 or 0; weight is optional (default 1). Ids must be
//! unique and free of commas; '/' separates the fold-group prefix.
void write_dataset(const std::filesystem::path& path, const PairDataset& ds);
PairDataset read_dataset(const std::filesystem::path& path);

std::string serialize_dataset(const PairDataset& ds);
PairDataset parse_dataset(const std::string& text,
                          const std::string& origin = "<string>");

//! Order-dependent FNV-1a digest over ids, labels, weights and the raw bits
//! of every observation; cheap and stable across runs.
std::uint64_t dataset_digest(const PairDataset& ds);

}  // namespace nepdf
