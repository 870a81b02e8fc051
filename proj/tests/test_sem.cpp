#include <doctest.h>

#include <cmath>

#include "nepdf/error.hpp"
#include "nepdf/metrics.hpp"
#include "nepdf/sem.hpp"

using namespace nepdf;

namespace {

SemParams params(Structure s, double a, double b, double g, int steps,
                 std::uint64_t seed = 1) {
  SemParams p;
  p.structure = s;
  p.alpha = a;
  p.beta = b;
  p.gamma = g;
  p.steps = steps;
  p.seed = seed;
  return p;
}

double lag1_corr(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> a_lag(a.begin(), a.end() - 1);
  std::vector<double> b_now(b.begin() + 1, b.end());
  return pearson(a_lag, b_now);
}

}  // namespace

TEST_CASE("step_noise with sigma forced to zero returns mu in [0, 10]") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double v = step_noise(rng, 10.0, 0.0);
    CHECK(v >= 0.0);
    CHECK(v <= 10.0);
  }
}

TEST_CASE("step_noise empirical mean sits near 5") {
  Rng rng(12345);
  double total = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) total += step_noise(rng);
  const double mean = total / n;
  CHECK(mean >= 4.5);
  CHECK(mean <= 5.5);
}

TEST_CASE("equal seeds give identical noise streams") {
  Rng a(777), b(777);
  for (int i = 0; i < 100; ++i) CHECK(step_noise(a) == step_noise(b));
}

TEST_CASE("parameter validation names the violated constraint") {
  CHECK_THROWS_WITH_AS(
      simulate(params(Structure::kV, 0.6, 0.5, 0, 10)),
      doctest::Contains("alpha + beta"), InvalidParams);
  CHECK_THROWS_AS(simulate(params(Structure::kChain, 0.6, 0.1, 0.5, 10)),
                  InvalidParams);
  CHECK_THROWS_AS(simulate(params(Structure::kChain, 0.1, 0.6, 0.5, 10)),
                  InvalidParams);
  CHECK_THROWS_AS(simulate(params(Structure::kReverseV, 0.0, 0.6, 0.5, 10)),
                  InvalidParams);
  CHECK_THROWS_AS(simulate(params(Structure::kV, -0.1, 0.5, 0, 10)),
                  InvalidParams);
  CHECK_THROWS_AS(simulate(params(Structure::kV, 0.1, 0.5, 0, 0)),
                  InvalidParams);
}

TEST_CASE("v structure with alpha=1, beta=0 freezes X at its start value") {
  const TripleSeries ts = simulate(params(Structure::kV, 1.0, 0.0, 0, 50));
  for (double v : ts.x) CHECK(v == ts.x[0]);
}

TEST_CASE("v structure with alpha=beta=0 decouples Y from X") {
  const TripleSeries ts =
      simulate(params(Structure::kV, 0.0, 0.0, 0, 10000));
  CHECK(std::abs(lag1_corr(ts.x, ts.y)) < 0.1);
}

TEST_CASE("chain with all coefficients zero is three independent streams") {
  const TripleSeries ts =
      simulate(params(Structure::kChain, 0.0, 0.0, 0.0, 10000));
  CHECK(std::abs(pearson(ts.x, ts.y)) < 0.1);
  CHECK(std::abs(pearson(ts.x, ts.z)) < 0.1);
  CHECK(std::abs(pearson(ts.z, ts.y)) < 0.1);
}

TEST_CASE("reverse-v with gamma=0 severs the edges") {
  const TripleSeries ts =
      simulate(params(Structure::kReverseV, 0.3, 0.3, 0.0, 10000));
  CHECK(std::abs(lag1_corr(ts.y, ts.x)) < 0.1);
  CHECK(std::abs(lag1_corr(ts.y, ts.z)) < 0.1);
}

TEST_CASE("simulation is deterministic in the seed") {
  const auto p = params(Structure::kReverseV, 0.2, 0.3, 0.4, 200, 99);
  const TripleSeries a = simulate(p);
  const TripleSeries b = simulate(p);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.z == b.z);
  SemParams q = p;
  q.seed = 100;
  CHECK(simulate(q).x != a.x);
}

TEST_CASE("burn_in drops leading steps but keeps length") {
  auto p = params(Structure::kV, 0.5, 0.2, 0, 100, 5);
  const TripleSeries plain = simulate(p);
  p.burn_in = 37;
  const TripleSeries warmed = simulate(p);
  CHECK(warmed.x.size() == 100);
  CHECK(warmed.x != plain.x);
}

TEST_CASE("label_pairs emits the six published pairs") {
  const TripleSeries ts = simulate(params(Structure::kV, 0.5, 0.5, 0, 64));

  SUBCASE("v structure labels") {
    const auto pairs = label_pairs(ts, "v000001");
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].id == "v000001/xy");
    CHECK(pairs[0].label == 1);
    CHECK(pairs[1].id == "v000001/yx");
    CHECK(pairs[1].label == -1);
    CHECK(pairs[2].id == "v000001/xz");
    CHECK(pairs[2].label == 0);
    CHECK(pairs[3].id == "v000001/zx");
    CHECK(pairs[3].label == 0);
    CHECK(pairs[4].id == "v000001/zy");
    CHECK(pairs[4].label == 1);
    CHECK(pairs[5].id == "v000001/yz");
    CHECK(pairs[5].label == -1);
    for (const auto& p : pairs) CHECK(p.n_obs() == 64);
    CHECK(pairs[0].x == ts.x);
    CHECK(pairs[0].y == ts.y);
    CHECK(pairs[1].x == ts.y);
    CHECK(pairs[1].y == ts.x);
  }

  SUBCASE("chain structure labels") {
    TripleSeries chain = ts;
    chain.params.structure = Structure::kChain;
    const auto pairs = label_pairs(chain, "c");
    CHECK(pairs[0].label == 0);   // (x, y)
    CHECK(pairs[1].label == 0);   // (y, x)
    CHECK(pairs[2].label == 1);   // (x, z)
    CHECK(pairs[3].label == -1);  // (z, x)
    CHECK(pairs[4].label == 1);   // (z, y)
    CHECK(pairs[5].label == -1);  // (y, z)
  }

  SUBCASE("ordered pairs carry negated labels") {
    for (auto structure :
         {Structure::kV, Structure::kChain, Structure::kReverseV}) {
      TripleSeries t2 = ts;
      t2.params.structure = structure;
      const auto pairs = label_pairs(t2, "s");
      CHECK(pairs[0].label == -pairs[1].label);
      CHECK(pairs[2].label == -pairs[3].label);
      CHECK(pairs[4].label == -pairs[5].label);
    }
  }

  SUBCASE("lag shifts observations") {
    const auto pairs = label_pairs(ts, "v", 1);
    CHECK(pairs[0].n_obs() == 63);
    CHECK(pairs[0].x[0] == ts.x[0]);   // a_{t-1}
    CHECK(pairs[0].y[0] == ts.y[1]);   // b_t
    CHECK_THROWS_AS(label_pairs(ts, "v", 64), InvalidParams);
    CHECK_THROWS_AS(label_pairs(ts, "v", -1), InvalidParams);
  }
}
