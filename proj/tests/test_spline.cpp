#include <doctest.h>

#include <cmath>

#include "nepdf/error.hpp"
#include "nepdf/rng.hpp"
#include "nepdf/spline.hpp"

using namespace nepdf;

TEST_CASE("hermite spline interpolates the knots exactly") {
  const HermiteSpline f{{0, 1, 2, 3, 4}, {5, -1, 2, 0, 3}, {1, 0, -2, 1, 0}};
  for (int j = 0; j < 5; ++j)
    CHECK(f(f.knots_x[static_cast<std::size_t>(j)]) ==
          f.knots_y[static_cast<std::size_t>(j)]);
}

TEST_CASE("constant knots with zero tangents reproduce the constant") {
  const HermiteSpline f{{0, 1, 2, 3, 4}, {7, 7, 7, 7, 7}, {0, 0, 0, 0, 0}};
  Rng rng(4);
  for (int i = 0; i < 50; ++i)
    CHECK(f(rng.uniform(0, 4)) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("linear data with unit tangents reproduce the identity") {
  const HermiteSpline f{{-2, -0.5, 1, 2.5, 4},
                        {-2, -0.5, 1, 2.5, 4},
                        {1, 1, 1, 1, 1}};
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-2, 4);
    CHECK(f(x) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("C1 continuity at interior knots") {
  Rng rng(17);
  HermiteSpline f;
  f.knots_x = {0, 0.7, 1.9, 3.1, 4.5};
  for (auto& y : f.knots_y) y = rng.normal(0, 3);
  for (auto& t : f.tangents) t = rng.normal(0, 2);
  const double h = 1e-7;
  for (int j = 1; j <= 3; ++j) {
    const double x = f.knots_x[static_cast<std::size_t>(j)];
    const double left = (f(x) - f(x - h)) / h;
    const double right = (f(x + h) - f(x)) / h;
    const double scale = std::max({1.0, std::abs(left), std::abs(right)});
    CHECK(std::abs(left - right) / scale < 1e-5);
    // both one-sided slopes approach the stored tangent
    CHECK(std::abs(left - f.tangents[static_cast<std::size_t>(j)]) / scale <
          1e-5);
  }
}

TEST_CASE("spline domain errors") {
  const HermiteSpline f{{0, 1, 2, 3, 4}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}};
  CHECK_THROWS_AS(f(-0.1), OutOfSupport);
  CHECK_THROWS_AS(f(4.1), OutOfSupport);
  CHECK(f(0.0) == 0.0);
  CHECK(f(4.0) == 0.0);

  CHECK_THROWS_AS(
      hermite_spline({0, 0, 1, 2, 3}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, 0.5),
      InvalidParams);
}
