#include "nepdf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nepdf/error.hpp"

namespace nepdf {

double GaussianMixture::sample(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t c = weights.size() - 1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) {
      c = i;
      break;
    }
  }
  return rng.normal(means[c], stddevs[c]);
}

GaussianMixture random_mixture(Rng& rng, int k, double hyper_max) {
  if (k < 1) throw InvalidParams("random_mixture: k must be positive");
  GaussianMixture mix;
  mix.means.resize(static_cast<std::size_t>(k));
  mix.stddevs.resize(static_cast<std::size_t>(k));
  mix.weights.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    mix.means[static_cast<std::size_t>(c)] = rng.uniform(0.0, hyper_max);
    mix.stddevs[static_cast<std::size_t>(c)] = rng.uniform(0.0, hyper_max);
  }
  // Dirichlet(1, ..., 1) via normalized exponentials.
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    const double e = -std::log1p(-rng.uniform());
    mix.weights[static_cast<std::size_t>(c)] = e;
    total += e;
  }
  for (double& w : mix.weights) w /= total;
  return mix;
}

HermiteSpline random_mechanism(Rng& rng, double lo, double hi) {
  if (!(lo < hi)) throw InvalidParams("random_mechanism: empty support");
  HermiteSpline f;
  const double h = (hi - lo) / 4.0;
  for (int j = 0; j < 5; ++j) f.knots_x[static_cast<std::size_t>(j)] = lo + h * j;
  f.knots_x[4] = hi;
  for (int j = 0; j < 5; ++j)
    f.knots_y[static_cast<std::size_t>(j)] = rng.normal(0.0, 5.0);
  for (int j = 0; j < 5; ++j)
    f.tangents[static_cast<std::size_t>(j)] = rng.normal() * h;
  return f;
}

PairSample make_synth_pair(std::string id, std::vector<double> xs,
                           const HermiteSpline& f, double noise_var,
                           Rng& rng) {
  if (xs.empty()) throw EmptyPair("make_synth_pair: no cause values");
  if (noise_var < 0)
    throw InvalidParams("make_synth_pair: negative noise variance");
  PairSample p;
  p.id = std::move(id);
  p.label = -1;
  const double noise_std = std::sqrt(noise_var);
  p.y.reserve(xs.size());
  for (double x : xs) p.y.push_back(f(x) + rng.normal(0.0, noise_std));
  p.x = std::move(xs);
  return p;
}

std::vector<PairSample> gen_synthetic_pairs(const SynthPairConfig& cfg) {
  if (cfg.n_samples < 1)
    throw InvalidParams("gen_synthetic_pairs: n_samples must be positive");
  if (cfg.m_min < 1 || cfg.m_max < cfg.m_min || cfg.k_min < 1 ||
      cfg.k_max < cfg.k_min || cfg.hyper_max <= 0 || cfg.noise_var_max < 0)
    throw InvalidParams("gen_synthetic_pairs: invalid configuration ranges");

  std::vector<PairSample> out;
  out.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (int i = 0; i < cfg.n_samples; ++i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const auto k = static_cast<int>(rng.uniform_int(cfg.k_min, cfg.k_max));
    const GaussianMixture mix = random_mixture(rng, k, cfg.hyper_max);
    const auto m = static_cast<std::size_t>(
        rng.uniform_int(cfg.m_min, cfg.m_max));
    std::vector<double> xs(m);
    for (double& x : xs) x = mix.sample(rng);

    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(m));

    // Support widened by one std on each side keeps every draw inside.
    double lo = *mn - sd;
    double hi = *mx + sd;
    if (!(lo < hi)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const HermiteSpline f = random_mechanism(rng, lo, hi);
    const double v = rng.uniform(0.0, cfg.noise_var_max);

    char id[16];
    std::snprintf(id, sizeof(id), "s%06d", i);
    out.push_back(make_synth_pair(id, std::move(xs), f, v, rng));
  }
  return out;
}

}  // namespace nepdf
