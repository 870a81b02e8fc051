#include "nepdf/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "nepdf/error.hpp"

namespace nepdf {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("not a decimal number: '" + text + "'");
  return v;
}

namespace {

constexpr char kDigestPrefix[] = "# nepdf-dataset config_digest=";
constexpr char kHeader[] = "id,label,weight,x,y";

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_series(const std::string& field,
                                 const std::string& where) {
  std::vector<double> out;
  std::istringstream ss(field);
  std::string token;
  while (ss >> token) {
    const double v = parse_double(token);
    if (!std::isfinite(v))
      throw ConfigError(where + ": non-finite observation '" + token + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::string serialize_dataset(const PairDataset& ds) {
  std::string out;
  out += kDigestPrefix;
  out += digest_hex(ds.config_digest);
  out += '\n';
  out += kHeader;
  out += '\n';
  for (const auto& p : ds.pairs) {
    out += p.id;
    out += ',';
    out += std::to_string(p.label);
    out += ',';
    out += format_double(p.weight);
    out += ',';
    for (std::size_t j = 0; j < p.x.size(); ++j) {
      if (j) out += ' ';
      out += format_double(p.x[j]);
    }
    out += ',';
    for (std::size_t j = 0; j < p.y.size(); ++j) {
      if (j) out += ' ';
      out += format_double(p.y[j]);
    }
    out += '\n';
  }
  return out;
}

PairDataset parse_dataset(const std::string& text, const std::string& origin) {
  PairDataset ds;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      if (line.rfind(kDigestPrefix, 0) == 0) {
        const std::string hex = line.substr(std::strlen(kDigestPrefix));
        ds.config_digest = std::stoull(hex, nullptr, 16);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHeader)
        throw ConfigError(where + ": expected header '" + kHeader + "'");
      header_seen = true;
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != 5)
      throw ConfigError(where + ": expected 5 comma-separated fields, got " +
                        std::to_string(fields.size()));
    PairSample p;
    p.id = fields[0];
    if (p.id.empty()) throw ConfigError(where + ": empty id");
    if (!ids.insert(p.id).second)
      throw ConfigError(where + ": duplicate id '" + p.id + "'");
    const long label = std::strtol(fields[1].c_str(), nullptr, 10);
    if (label != 1 && label != -1 && label != 0)
      throw ConfigError(where + ": label must be 1, -1 or 0");
    p.label = static_cast<int>(label);
    p.weight = fields[2].empty() ? 1.0 : parse_double(fields[2]);
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
      throw ConfigError(where + ": weight must be a nonnegative number");
    p.x = parse_series(fields[3], where);
    p.y = parse_series(fields[4], where);
    if (p.x.size() != p.y.size())
      throw ConfigError(where + ": x has " + std::to_string(p.x.size()) +
                        " values, y has " + std::to_string(p.y.size()));
    if (p.x.empty()) throw ConfigError(where + ": pair has no observations");
    ds.pairs.push_back(std::move(p));
  }
  if (!header_seen)
    throw ConfigError(origin + ": missing dataset header");
  return ds;
}

void write_dataset(const std::filesystem::path& path, const PairDataset& ds) {
  for (const auto& p : ds.pairs)
    if (p.id.find(',') != std::string::npos ||
        p.id.find('\n') != std::string::npos)
      throw ConfigError("dataset id contains a separator: '" + p.id + "'");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string text = serialize_dataset(ds);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

PairDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), path.string());
}

std::uint64_t dataset_digest(const PairDataset& ds) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix_bytes = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001B3ULL;
    }
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    mix_bytes(&bits, sizeof(bits));
  };
  for (const auto& p : ds.pairs) {
    mix_bytes(p.id.data(), p.id.size());
    const std::int32_t label = p.label;
    mix_bytes(&label, sizeof(label));
    mix_double(p.weight);
    for (double v : p.x) mix_double(v);
    for (double v : p.y) mix_double(v);
  }
  return h;
}

}  // namespace nepdf
