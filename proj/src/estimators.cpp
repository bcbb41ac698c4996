#include "affdim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "affdim/error.hpp"

namespace affdim {

namespace {

void require_points(std::size_t n) {
  if (n < kMinEstimatorPoints)
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(n) + " samples, need at least " + std::to_string(kMinEstimatorPoints));
}

std::vector<double> sorted_radii(const std::vector<double>& radii) {
  if (radii.size() < 4) throw Error(ErrorCode::InvalidArgument, "need at least four radii");
  std::vector<double> r = radii;
  for (double x : r)
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "radii must be positive");
  std::sort(r.begin(), r.end(), std::greater<>());
  if (std::adjacent_find(r.begin(), r.end()) != r.end())
    throw Error(ErrorCode::InvalidArgument, "radii must be distinct");
  return r;
}

/// Fits log C against log r over the radii with non-zero C.
EstimateSeries fit_correlation(std::vector<double> radii, std::vector<double> c) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (c[k] > 0.0) {
      lx.push_back(std::log(radii[k]));
      ly.push_back(std::log(c[k]));
    }
  if (lx.size() < 2) throw Error(ErrorCode::TooFewPoints, "fewer than two radii with close pairs");
  const LineFit fit = least_squares(lx, ly);
  return {std::move(radii), std::move(c), fit.slope, fit.r2};
}

}  // namespace

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 && sxx > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

EstimateSeries box_dimension_estimate(const std::vector<Vec2>& points, int k_min, int k_max) {
  require_points(points.size());
  if (k_min < 1 || k_max <= k_min) throw Error(ErrorCode::InvalidArgument, "need 1 <= k_min < k_max");
  if (k_max > 30) throw Error(ErrorCode::InvalidArgument, "k_max above 30 overflows the cell index");
  EstimateSeries out;
  std::vector<double> lx, ly;
  std::vector<std::pair<std::int64_t, std::int64_t>> cells(points.size());
  for (int k = k_min; k <= k_max; ++k) {
    const double scale = std::ldexp(1.0, k);
    const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const Vec2 p = points[static_cast<std::size_t>(i)];
      cells[static_cast<std::size_t>(i)] = {static_cast<std::int64_t>(std::floor(p.x * scale)),
                                            static_cast<std::int64_t>(std::floor(p.y * scale))};
    }
    std::sort(cells.begin(), cells.end());
    const auto count = static_cast<double>(std::unique(cells.begin(), cells.end()) - cells.begin());
    out.scales.push_back(1.0 / scale);
    out.values.push_back(count);
    lx.push_back(k * std::log(2.0));
    ly.push_back(std::log(count));
  }
  const LineFit fit = least_squares(lx, ly);
  out.slope = fit.slope;
  out.r2 = fit.r2;
  return out;
}

EstimateSeries correlation_dimension_estimate(const std::vector<double>& values, const std::vector<double>& radii) {
  require_points(values.size());
  const auto r = sorted_radii(radii);
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  const double pairs = 0.5 * static_cast<double>(v.size()) * static_cast<double>(v.size() - 1);
  std::vector<double> c(r.size());
  const auto nr = static_cast<std::int64_t>(r.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nr; ++k) {
    // Two pointers over the sorted sample; counts are exact integers.
    std::uint64_t close = 0;
    std::size_t j = 0;
    const double rad = r[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (j < i) j = i;
      while (j + 1 < v.size() && v[j + 1] - v[i] < rad) ++j;
      close += j - i;
    }
    c[static_cast<std::size_t>(k)] = static_cast<double>(close) / pairs;
  }
  return fit_correlation(r, std::move(c));
}

EstimateSeries correlation_dimension_estimate(const std::vector<Vec2>& points, const std::vector<double>& radii) {
  require_points(points.size());
  const auto r = sorted_radii(radii);
  const std::size_t n = points.size();
  // Per-row counts for each radius, summed in row order.
  std::vector<std::uint64_t> counts(r.size(), 0);
  const auto nn = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(r.size(), 0);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < nn; ++i) {
      const Vec2 p = points[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
        const double d = norm(points[j] - p);
        for (std::size_t k = 0; k < r.size() && d < r[k]; ++k) ++local[k];
      }
    }
#pragma omp critical
    for (std::size_t k = 0; k < r.size(); ++k) counts[k] += local[k];
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> c(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) c[k] = static_cast<double>(counts[k]) / pairs;
  return fit_correlation(r, std::move(c));
}

std::vector<double> geometric_radii(double r_max, double r_min, int n) {
  if (n < 2 || !(r_max > r_min) || !(r_min > 0.0))
    throw Error(ErrorCode::InvalidArgument, "need n >= 2 and r_max > r_min > 0");
  std::vector<double> r;
  const double q = std::pow(r_min / r_max, 1.0 / (n - 1));
  for (int k = 0; k < n; ++k) r.push_back(r_max * std::pow(q, k));
  return r;
}

}  // namespace affdim
