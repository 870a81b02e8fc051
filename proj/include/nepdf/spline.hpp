#pragma once

#include <array>

namespace nepdf {

//! Piecewise-cubic Hermite interpolant on five knots. Exact at the knots and
//! C1 across them.
struct HermiteSpline {
  std::array<double, 5> knots_x{};  // strictly increasing
  std::array<double, 5> knots_y{};
  std::array<double, 5> tangents{};  // dy/dx at each knot

  double operator()(double x) const;
};

//! Evaluates the interpolant at x. Throws OutOfSupport when x lies outside
//! [knots_x[0], knots_x[4]] and InvalidParams for non-increasing knots.
double hermite_spline(const std::array<double, 5>& knots_x,
                      const std::array<double, 5>& knots_y,
                      const std::array<double, 5>& tangents, double x);

}  // namespace nepdf
