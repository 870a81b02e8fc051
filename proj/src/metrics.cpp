#include "nepdf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/QR>

#include "nepdf/error.hpp"

namespace nepdf {

double auroc(const std::vector<double>& scores,
             const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw LengthMismatch("auroc: scores/labels size mismatch");
  const auto n = scores.size();
  std::size_t n_pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw InvalidLabel("auroc: labels must be 0 or 1");
    n_pos += static_cast<std::size_t>(l);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw DegenerateLabels("auroc: need at least one positive and one "
                           "negative label");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Average ranks within tie groups; U = sum of positive ranks - P(P+1)/2.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) +
                             static_cast<double>(j + 1)) /
                            2.0;
    for (std::size_t q = i; q <= j; ++q)
      if (labels[idx[q]] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) *
                       (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double mean_ovr_auroc(const Matrix<double>& probabilities,
                      const std::vector<int>& labels) {
  if (probabilities.cols() != 3)
    throw ShapeMismatch("mean_ovr_auroc: expected 3 probability columns");
  if (static_cast<std::size_t>(probabilities.rows()) != labels.size())
    throw ShapeMismatch("mean_ovr_auroc: rows/labels mismatch");
  static constexpr int kClasses[3] = {1, -1, 0};
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> scores(labels.size());
    std::vector<int> binary(labels.size());
    bool any_pos = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      scores[i] = probabilities(static_cast<Eigen::Index>(i), c);
      binary[i] = labels[i] == kClasses[c] ? 1 : 0;
      any_pos |= binary[i] == 1;
    }
    if (!any_pos)
      throw DegenerateLabels("mean_ovr_auroc: class " +
                             std::to_string(kClasses[c]) + " absent");
    total += auroc(scores, binary);
  }
  return total / 3.0;
}

double combine(double y_causal_prob, double y_ind) {
  if (!(y_causal_prob >= 0.0 && y_causal_prob <= 1.0))
    throw OutOfRange("combine: y_causal must lie in [0, 1]");
  if (!(y_ind >= 0.0 && y_ind <= 1.0))
    throw OutOfRange("combine: y_ind must lie in [0, 1]");
  return y_ind * (2.0 * y_causal_prob - 1.0);
}

double bidirectional_auroc(const std::vector<double>& combined_scores,
                           const std::vector<int>& labels) {
  if (combined_scores.size() != labels.size())
    throw LengthMismatch("bidirectional_auroc: size mismatch");
  std::vector<double> neg_scores(combined_scores.size());
  std::vector<int> pos_fwd(labels.size()), pos_rev(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    validate_label(labels[i]);
    neg_scores[i] = -combined_scores[i];
    pos_fwd[i] = labels[i] == 1 ? 1 : 0;
    pos_rev[i] = labels[i] == -1 ? 1 : 0;
  }
  return (auroc(combined_scores, pos_fwd) + auroc(neg_scores, pos_rev)) / 2.0;
}

double weighted_accuracy(const std::vector<int>& predictions,
                         const std::vector<int>& labels,
                         const std::vector<double>& weights) {
  if (predictions.size() != labels.size() || labels.size() != weights.size())
    throw LengthMismatch("weighted_accuracy: size mismatch");
  double mass = 0.0, hit = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (weights[i] < 0)
      throw OutOfRange("weighted_accuracy: negative weight");
    mass += weights[i];
    if (predictions[i] == labels[i]) hit += weights[i];
  }
  if (mass == 0.0)
    throw ZeroWeightMass("weighted_accuracy: weights sum to zero");
  return hit / mass;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw LengthMismatch("pearson: size mismatch");
  const auto n = x.size();
  if (n < 2) throw ZeroVariance("pearson: need at least two observations");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ZeroVariance("pearson: an axis has zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double mutual_information(const NepdfMatrix& epdf) {
  if (epdf.normalized)
    throw NotADistribution("mutual_information: needs the pre-normalization "
                           "EPDF, not the max-normalized matrix");
  const auto& p = epdf.values;
  if (p.minCoeff() < 0.0)
    throw NotADistribution("mutual_information: negative entry");
  if (std::abs(p.sum() - 1.0) > 1e-6)
    throw NotADistribution("mutual_information: entries do not sum to 1");
  const VectorXd px = p.rowwise().sum();
  const VectorXd py = p.colwise().sum();
  double mi = 0.0;
  for (Eigen::Index o = 0; o < p.rows(); ++o) {
    for (Eigen::Index q = 0; q < p.cols(); ++q) {
      const double joint = p(o, q);
      if (joint <= 0.0) continue;
      mi += joint * std::log(joint / (px(o) * py(q)));
    }
  }
  return std::max(0.0, mi);
}

namespace {

//! Mean squared residual of a degree-d least-squares fit of v on u, with the
//! predictor standardized for conditioning.
double polyfit_mse(const std::vector<double>& u, const std::vector<double>& v,
                   int degree) {
  const auto n = static_cast<Eigen::Index>(u.size());
  double mean = 0.0;
  for (double val : u) mean += val;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double val : u) var += (val - mean) * (val - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));
  if (sd == 0.0)
    throw SingularFit("bivariate_fit_score: constant predictor");

  Matrix<double> design(n, degree + 1);
  VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = (u[static_cast<std::size_t>(i)] - mean) / sd;
    double pow = 1.0;
    for (int d = 0; d <= degree; ++d) {
      design(i, d) = pow;
      pow *= z;
    }
    target(i) = v[static_cast<std::size_t>(i)];
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < degree + 1)
    throw SingularFit("bivariate_fit_score: rank-deficient design matrix");
  const VectorXd coef = qr.solve(target);
  const double rss = (design * coef - target).squaredNorm();
  return rss / static_cast<double>(n);
}

}  // namespace

double bivariate_fit_score(const PairSample& pair, int degree) {
  if (degree < 1) throw InvalidParams("bivariate_fit_score: degree >= 1");
  if (pair.x.size() != pair.y.size())
    throw LengthMismatch("bivariate_fit_score: x/y size mismatch");
  if (pair.x.size() < static_cast<std::size_t>(degree) + 2)
    throw SingularFit("bivariate_fit_score: need at least degree + 2 points");
  const double mse_forward = polyfit_mse(pair.x, pair.y, degree);   // y | x
  const double mse_reverse = polyfit_mse(pair.y, pair.x, degree);   // x | y
  const double floor = std::numeric_limits<double>::min();
  return std::log(std::max(mse_reverse, floor)) -
         std::log(std::max(mse_forward, floor));
}

}  // namespace nepdf
