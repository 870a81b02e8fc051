#include "nepdf/sem.hpp"

#include <cmath>

#include "nepdf/error.hpp"

namespace nepdf {

const char* structure_name(Structure s) {
  switch (s) {
    case Structure::kV:
      return "v";
    case Structure::kChain:
      return "chain";
    case Structure::kReverseV:
      return "reverse-v";
  }
  return "?";
}

Structure parse_structure(const std::string& name) {
  if (name == "v") return Structure::kV;
  if (name == "chain") return Structure::kChain;
  if (name == "reverse-v" || name == "reverse_v") return Structure::kReverseV;
  throw InvalidParams("unknown structure '" + name +
                      "' (expected v, chain or reverse-v)");
}

void SemParams::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma))
    throw InvalidParams("alpha, beta, gamma must lie in [0, 1]");
  if (steps < 1) throw InvalidParams("steps must be positive");
  if (burn_in < 0) throw InvalidParams("burn_in must be nonnegative");
  switch (structure) {
    case Structure::kV:
      if (alpha + beta > 1.0)
        throw InvalidParams("v structure requires alpha + beta <= 1 "
                            "(noise weight would be negative)");
      break;
    case Structure::kChain:
      if (alpha + gamma > 1.0)
        throw InvalidParams("chain structure requires alpha + gamma <= 1 "
                            "(noise weight would be negative)");
      if (beta + gamma > 1.0)
        throw InvalidParams("chain structure requires beta + gamma <= 1 "
                            "(noise weight would be negative)");
      break;
    case Structure::kReverseV:
      if (beta + gamma > 1.0)
        throw InvalidParams("reverse-v structure requires beta + gamma <= 1 "
                            "(noise weight would be negative)");
      break;
  }
}

double step_noise(Rng& rng, double mu_max, double sigma_max) {
  const double mu = rng.uniform(0.0, mu_max);
  const double sigma = rng.uniform(0.0, sigma_max);
  return rng.normal(mu, sigma);
}

namespace {

struct Buffers {
  std::vector<double> x, y, z;
  int total;

  explicit Buffers(const SemParams& p)
      : total(p.steps + p.burn_in) {
    x.resize(static_cast<std::size_t>(total));
    y.resize(static_cast<std::size_t>(total));
    z.resize(static_cast<std::size_t>(total));
  }

  TripleSeries emit(const SemParams& p) const {
    TripleSeries ts;
    ts.params = p;
    const auto skip = static_cast<std::ptrdiff_t>(p.burn_in);
    ts.x.assign(x.begin() + skip, x.end());
    ts.y.assign(y.begin() + skip, y.end());
    ts.z.assign(z.begin() + skip, z.end());
    return ts;
  }
};

}  // namespace

TripleSeries simulate_v(const SemParams& p) {
  if (p.structure != Structure::kV)
    throw InvalidParams("simulate_v called with a different structure");
  p.validate();
  Rng rng(p.seed);
  Buffers b(p);
  const double a = p.alpha, be = p.beta;
  b.x[0] = step_noise(rng);
  b.z[0] = step_noise(rng);
  b.y[0] = step_noise(rng);
  for (int t = 1; t < b.total; ++t) {
    b.x[t] = a * b.x[t - 1] + (1 - a) * step_noise(rng);
    b.z[t] = a * b.z[t - 1] + (1 - a) * step_noise(rng);
    b.y[t] = a * b.y[t - 1] + be / 2 * (b.x[t - 1] + b.z[t - 1]) +
             (1 - be - a) * step_noise(rng);
  }
  return b.emit(p);
}

TripleSeries simulate_chain(const SemParams& p) {
  if (p.structure != Structure::kChain)
    throw InvalidParams("simulate_chain called with a different structure");
  p.validate();
  Rng rng(p.seed);
  Buffers b(p);
  const double a = p.alpha, be = p.beta, g = p.gamma;
  b.x[0] = step_noise(rng);
  b.z[0] = step_noise(rng);
  b.y[0] = step_noise(rng);
  for (int t = 1; t < b.total; ++t) {
    const double xp = b.x[t - 1], zp = b.z[t - 1];
    b.x[t] = a * xp + (1 - a) * step_noise(rng);
    b.z[t] = be * b.z[t - 1] + g * (xp - 1) * (xp - 1) +
             (1 - g - a) * step_noise(rng);
    b.y[t] = be * zp + g / 2 * (std::cos(zp) + std::sin(zp)) +
             (1 - be - g) * step_noise(rng);
  }
  return b.emit(p);
}

TripleSeries simulate_reverse_v(const SemParams& p) {
  if (p.structure != Structure::kReverseV)
    throw InvalidParams("simulate_reverse_v called with a different structure");
  p.validate();
  Rng rng(p.seed);
  Buffers b(p);
  const double a = p.alpha, be = p.beta, g = p.gamma;
  b.y[0] = step_noise(rng);
  b.x[0] = step_noise(rng);
  b.z[0] = step_noise(rng);
  for (int t = 1; t < b.total; ++t) {
    const double yp = b.y[t - 1];
    b.y[t] = a * yp + (1 - a) * step_noise(rng);
    b.x[t] = be * b.x[t - 1] + g * yp + (1 - be - g) * step_noise(rng);
    b.z[t] = be * b.z[t - 1] + g * yp + (1 - be - g) * step_noise(rng);
  }
  return b.emit(p);
}

TripleSeries simulate(const SemParams& p) {
  switch (p.structure) {
    case Structure::kV:
      return simulate_v(p);
    case Structure::kChain:
      return simulate_chain(p);
    case Structure::kReverseV:
      return simulate_reverse_v(p);
  }
  throw InvalidParams("simulate: unknown structure");
}

namespace {

PairSample make_lagged_pair(const std::vector<double>& a,
                            const std::vector<double>& b, int lag,
                            std::string id, int label) {
  PairSample p;
  p.id = std::move(id);
  p.label = label;
  p.x.assign(a.begin(), a.end() - lag);
  p.y.assign(b.begin() + lag, b.end());
  return p;
}

}  // namespace

std::vector<PairSample> label_pairs(const TripleSeries& ts,
                                    const std::string& id_prefix, int lag) {
  const auto n = static_cast<int>(ts.x.size());
  if (lag < 0 || lag >= n)
    throw InvalidParams("label_pairs: lag must lie in [0, T)");

  // Ground-truth label of each ordered pair, per structure.
  int xy = 0, xz = 0, zy = 0;
  switch (ts.params.structure) {
    case Structure::kV:
      xy = 1, xz = 0, zy = 1;
      break;
    case Structure::kChain:
      xy = 0, xz = 1, zy = 1;
      break;
    case Structure::kReverseV:
      xy = 1, xz = 0, zy = 1;
      break;
  }
  auto pair = [&](const std::vector<double>& a, const std::vector<double>& b,
                  const char* suffix, int label) {
    return make_lagged_pair(a, b, lag, id_prefix + "/" + suffix, label);
  };
  return {pair(ts.x, ts.y, "xy", xy), pair(ts.y, ts.x, "yx", -xy),
          pair(ts.x, ts.z, "xz", xz), pair(ts.z, ts.x, "zx", -xz),
          pair(ts.z, ts.y, "zy", zy), pair(ts.y, ts.z, "yz", -zy)};
}

}  // namespace nepdf
