#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nepdf/pair_sample.hpp"
#include "nepdf/rng.hpp"
#include "nepdf/spline.hpp"

namespace nepdf {

//! Generator settings for spline-mechanism cause-effect pairs. Each pair i
//! draws m_i cause values from a k_i-component Gaussian mixture and passes
//! them through a random 5-knot cubic Hermite spline plus additive noise.
struct SynthPairConfig {
  int n_samples = 15000;
  int m_min = 100;
  int m_max = 1000;  // observations per pair, m_i ~ U[m_min, m_max]
  int k_min = 1;
  int k_max = 5;  // mixture components, k_i ~ U[k_min, k_max]
  double hyper_max = 5.0;      // component mean/std ~ U[0, hyper_max]
  double noise_var_max = 5.0;  // noise variance v_i ~ U(0, noise_var_max)
  std::uint64_t seed = 0;
};

struct GaussianMixture {
  std::vector<double> weights;  // sums to 1
  std::vector<double> means;
  std::vector<double> stddevs;

  double sample(Rng& rng) const;
};

//! k components with mean and std each uniform in [0, hyper_max]; weights
//! from a symmetric Dirichlet(1).
GaussianMixture random_mixture(Rng& rng, int k, double hyper_max);

//! Random mechanism over [lo, hi]: equally spaced knots, Normal(0, 5)
//! heights, standard-normal tangents scaled by the knot spacing.
HermiteSpline random_mechanism(Rng& rng, double lo, double hi);

//! y_j = f(x_j) + e_j with e_j ~ Normal(0, noise_var). The emitted pair
//! carries label -1 for the (cause, effect) order; transpose augmentation
//! supplies the (effect, cause) twin with label 1 at training time.
PairSample make_synth_pair(std::string id, std::vector<double> xs,
                           const HermiteSpline& f, double noise_var, Rng& rng);

//! cfg.n_samples labeled cause-effect pairs, ids "s<index>".
std::vector<PairSample> gen_synthetic_pairs(const SynthPairConfig& cfg);

}  // namespace nepdf
