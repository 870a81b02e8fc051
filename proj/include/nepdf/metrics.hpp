#pragma once

#include <vector>

#include "nepdf/histogram.hpp"
#include "nepdf/pair_sample.hpp"
#include "nepdf/types.hpp"

namespace nepdf {

//! Probability that a random positive outscores a random negative, ties
//! credited 0.5 (the Mann-Whitney statistic). labels hold 0/1.
double auroc(const std::vector<double>& scores,
             const std::vector<int>& labels);

//! Unweighted mean of the three one-vs-rest AUROCs; probabilities follow the
//! fixed class mapping (columns +1, -1, 0), labels are domain labels.
double mean_ovr_auroc(const Matrix<double>& probabilities,
                      const std::vector<int>& labels);

//! y_pred = y_ind * (2 * y_causal - 1); both inputs must lie in [0, 1].
double combine(double y_causal_prob, double y_ind);

//! Mean of AUROC(label==1 vs rest, score) and AUROC(label==-1 vs rest,
//! -score) on the signed combined scores.
double bidirectional_auroc(const std::vector<double>& combined_scores,
                           const std::vector<int>& labels);

double weighted_accuracy(const std::vector<int>& predictions,
                         const std::vector<int>& labels,
                         const std::vector<double>& weights);

//! Sample Pearson correlation coefficient.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

//! Plug-in mutual information (nats) of a pre-normalization EPDF, using the
//! histogram marginals and the convention 0 * ln 0 = 0.
double mutual_information(const NepdfMatrix& epdf);

//! Least-squares polynomial fit of y on x and of x on y;
//! returns log(MSE_{x|y}) - log(MSE_{y|x}), so a better forward fit gives a
//! positive score. Exactly antisymmetric under axis swap.
double bivariate_fit_score(const PairSample& pair, int degree = 3);

}  // namespace nepdf
