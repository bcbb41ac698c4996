#pragma once

// Empirical dimension estimators used to cross-check the formulas.

#include <vector>

#include "affdim/linalg2.hpp"

namespace affdim {

struct EstimateSeries {
  std::vector<double> scales;  ///< strictly decreasing
  std::vector<double> values;  ///< box counts or correlation integrals
  double slope = 0.0;
  double r2 = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares y = slope x + intercept; r2 = 1 when y is constant.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr std::size_t kMinEstimatorPoints = 1000;

/// Occupied cells of the dyadic grids 2^-k, k = k_min..k_max; slope of
/// log count against k log 2. Throws TooFewPoints below 1000 points.
EstimateSeries box_dimension_estimate(const std::vector<Vec2>& points, int k_min, int k_max);

/// Fraction of pairs closer than r for each radius (sorted decreasing);
/// slope of log C(r) against log r over radii with C(r) > 0.
EstimateSeries correlation_dimension_estimate(const std::vector<double>& values, const std::vector<double>& radii);
EstimateSeries correlation_dimension_estimate(const std::vector<Vec2>& points, const std::vector<double>& radii);

/// n radii geometrically spaced from r_max down to r_min.
std::vector<double> geometric_radii(double r_max, double r_min, int n);

}  // namespace affdim
