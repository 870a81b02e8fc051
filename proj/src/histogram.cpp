#include "nepdf/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "nepdf/error.hpp"

namespace nepdf {

namespace {

bool strictly_increasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i)
    if (!(e[i - 1] < e[i])) return false;
  return true;
}

//! Uniform edges over [lo, hi] with the end points set exactly.
std::vector<double> uniform_edges(double lo, double hi, int k) {
  std::vector<double> edges(static_cast<std::size_t>(k) + 1);
  edges.front() = lo;
  edges.back() = hi;
  for (int i = 1; i < k; ++i)
    edges[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * (static_cast<double>(i) / k);
  return edges;
}

std::vector<double> linear_edges(double lo, double hi, int k) {
  if (lo == hi) {
    const double eps = std::max(std::abs(lo), 1.0) * 1e-6;
    return uniform_edges(lo - eps, hi + eps, k);
  }
  auto edges = uniform_edges(lo, hi, k);
  if (!strictly_increasing(edges)) {
    // Range below representable resolution: fall back to the widened grid.
    const double mid = lo + (hi - lo) / 2;
    const double eps = std::max(std::abs(mid), 1.0) * 1e-6;
    edges = uniform_edges(mid - eps, mid + eps, k);
  }
  return edges;
}

}  // namespace

std::vector<double> compute_bin_edges(const std::vector<double>& values, int k,
                                      bool log_space) {
  if (values.empty()) throw EmptyInput("compute_bin_edges: no values");
  if (k < 1) throw InvalidK("compute_bin_edges: k must be positive");
  for (double v : values)
    if (!std::isfinite(v))
      throw EmptyInput("compute_bin_edges: non-finite value");

  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!log_space) return linear_edges(*mn, *mx, k);

  if (*mn <= 0.0)
    throw NonPositiveForLog("compute_bin_edges: log-space binning needs "
                            "strictly positive values");
  auto edges = linear_edges(std::log(*mn), std::log(*mx), k);
  const bool degenerate = (*mn == *mx);
  for (double& e : edges) e = std::exp(e);
  if (!degenerate) {
    // exp(log(v)) can be off by an ulp; the outer edges must touch the data.
    edges.front() = *mn;
    edges.back() = *mx;
  }
  if (!strictly_increasing(edges)) {
    const double eps = std::max(std::abs(*mn), 1.0) * 1e-6;
    return uniform_edges(*mn - eps, *mx + eps, k);
  }
  return edges;
}

int bin_index(const std::vector<double>& edges, double value) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  auto idx = static_cast<int>(it - edges.begin()) - 1;
  const int last = static_cast<int>(edges.size()) - 2;
  return std::clamp(idx, 0, last);
}

NepdfMatrix build_epdf(const PairSample& pair, int k, bool log_space) {
  if (k < 2) throw InvalidK("build_epdf: k must be at least 2");
  if (pair.x.size() != pair.y.size())
    throw LengthMismatch("build_epdf: x/y length mismatch in pair " + pair.id);
  if (pair.x.empty()) throw EmptyPair("build_epdf: pair " + pair.id);

  NepdfMatrix m;
  m.grid.edges_x = compute_bin_edges(pair.x, k, log_space);
  m.grid.edges_y = compute_bin_edges(pair.y, k, log_space);
  m.grid.log_space = log_space;
  m.values = MatrixXd::Zero(k, k);
  for (std::size_t j = 0; j < pair.x.size(); ++j) {
    const int o = bin_index(m.grid.edges_x, pair.x[j]);
    const int p = bin_index(m.grid.edges_y, pair.y[j]);
    m.values(o, p) += 1.0;
  }
  m.n_obs = pair.x.size();
  m.values /= static_cast<double>(m.n_obs);
  m.normalized = false;
  return m;
}

NepdfMatrix build_nepdf(const PairSample& pair, int k, bool log_space,
                        bool log_transform) {
  NepdfMatrix m = build_epdf(pair, k, log_space);
  if (log_transform) m.values = m.values.array().log1p().matrix();
  m.values /= m.values.maxCoeff();
  m.normalized = true;
  return m;
}

NepdfMatrix transpose_nepdf(const NepdfMatrix& m) {
  NepdfMatrix out;
  out.values = m.values.transpose();
  out.grid.edges_x = m.grid.edges_y;
  out.grid.edges_y = m.grid.edges_x;
  out.grid.log_space = m.grid.log_space;
  out.n_obs = m.n_obs;
  out.normalized = m.normalized;
  return out;
}

std::vector<std::pair<NepdfMatrix, int>> augment_with_transposes(
    const std::vector<std::pair<NepdfMatrix, int>>& dataset) {
  std::vector<std::pair<NepdfMatrix, int>> out;
  out.reserve(dataset.size() * 2);
  for (const auto& [m, label] : dataset) {
    validate_label(label);
    out.emplace_back(m, label);
    out.emplace_back(transpose_nepdf(m), -label);
  }
  return out;
}

}  // namespace nepdf
