#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nepdf/pair_sample.hpp"
#include "nepdf/rng.hpp"

namespace nepdf {

enum class Structure { kV, kChain, kReverseV };

const char* structure_name(Structure s);
Structure parse_structure(const std::string& name);

//! Coefficients for one three-variable autoregressive system. The weight
//! left for the innovation term must stay nonnegative, which bounds the
//! admissible coefficient sums per structure.
struct SemParams {
  Structure structure = Structure::kV;
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;  // ignored for the V structure
  int steps = 1000;    // emitted series length T
  int burn_in = 0;     // leading steps simulated and discarded
  std::uint64_t seed = 0;

  void validate() const;
};

//! Simulated series for (X, Y, Z), each of length steps.
struct TripleSeries {
  std::vector<double> x, y, z;
  SemParams params;
};

//! One innovation: mu ~ U[0, mu_max], sigma ~ U[0, sigma_max], then one draw
//! from Normal(mu, sigma). Fresh (mu, sigma) on every call.
double step_noise(Rng& rng, double mu_max = 10.0, double sigma_max = 50.0);

//! X and Z evolve independently; both feed Y.
TripleSeries simulate_v(const SemParams& p);

//! X feeds Z, Z feeds Y.
TripleSeries simulate_chain(const SemParams& p);

//! Y evolves autonomously and feeds both X and Z.
TripleSeries simulate_reverse_v(const SemParams& p);

TripleSeries simulate(const SemParams& p);

//! The six ordered pairs with the structure's ground-truth labels.
//! Observations are contemporaneous (a_t, b_t) tuples; lag > 0 pairs
//! (a_{t-lag}, b_t) instead. Ids are "<prefix>/<ab>".
std::vector<PairSample> label_pairs(const TripleSeries& ts,
                                    const std::string& id_prefix, int lag = 0);

}  // namespace nepdf
