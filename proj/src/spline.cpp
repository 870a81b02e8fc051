#include "nepdf/spline.hpp"

#include <algorithm>

#include "nepdf/error.hpp"

namespace nepdf {

double HermiteSpline::operator()(double x) const {
  return hermite_spline(knots_x, knots_y, tangents, x);
}

double hermite_spline(const std::array<double, 5>& knots_x,
                      const std::array<double, 5>& knots_y,
                      const std::array<double, 5>& tangents, double x) {
  for (std::size_t j = 1; j < knots_x.size(); ++j)
    if (!(knots_x[j - 1] < knots_x[j]))
      throw InvalidParams("hermite_spline: knots must be strictly increasing");
  if (x < knots_x.front() || x > knots_x.back())
    throw OutOfSupport("hermite_spline: x outside the knot span");

  auto it = std::upper_bound(knots_x.begin(), knots_x.end(), x);
  auto j = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(it - knots_x.begin() - 1, 0, 3));

  const double h = knots_x[j + 1] - knots_x[j];
  const double t = (x - knots_x[j]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * knots_y[j] + h10 * h * tangents[j] + h01 * knots_y[j + 1] +
         h11 * h * tangents[j + 1];
}

}  // namespace nepdf
