#include <doctest.h>

#include <cmath>

#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/ergodic.hpp"
#include "affdim/estimators.hpp"
#include "affdim/reference.hpp"
#include "affdim/splitting.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

namespace {

std::vector<Vec2> uniform_points(std::size_t n, std::uint64_t seed, bool on_segment) {
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    Gen g(seed, k);
    const double x = g.uniform(0.0, 1.0);
    pts[k] = on_segment ? Vec2{x, 0.3 * x + 0.1} : Vec2{x, g.uniform(0.0, 1.0)};
  }
  return pts;
}

}  // namespace

TEST_CASE("least squares") {
  const auto f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(least_squares({0, 1, 2}, {4, 4, 4}).r2 == 1.0);
}

TEST_CASE("box counting on a segment and a square") {
  const auto seg = box_dimension_estimate(uniform_points(200000, 1, true), 3, 8);
  CHECK(std::abs(seg.slope - 1.0) < 0.05);
  const auto sq = box_dimension_estimate(uniform_points(400000, 2, false), 2, 6);
  CHECK(std::abs(sq.slope - 2.0) < 0.05);
  CHECK(sq.scales.size() == 5);
  CHECK_THROWS_AS(box_dimension_estimate(uniform_points(999, 3, false), 2, 6), Error);
  CHECK_THROWS_AS(box_dimension_estimate(uniform_points(2000, 3, false), 6, 6), Error);
}

TEST_CASE("box counts match the ordered-set reference") {
  const auto pts = uniform_points(5000, 4, false);
  const auto est = box_dimension_estimate(pts, 1, 7);
  for (int k = 1; k <= 7; ++k)
    CHECK(est.values[static_cast<std::size_t>(k - 1)] == static_cast<double>(reference::box_count(pts, k)));
}

TEST_CASE("correlation integrals") {
  std::vector<double> xs(20000);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = Gen(5, k).uniform(0.0, 1.0);
  const auto radii = geometric_radii(0.1, 0.001, 8);
  CHECK(radii.front() == doctest::Approx(0.1));
  CHECK(radii.back() == doctest::Approx(0.001));
  CHECK(std::abs(correlation_dimension_estimate(xs, radii).slope - 1.0) < 0.05);

  const std::vector<double> atoms(2000, 0.25);
  CHECK(std::abs(correlation_dimension_estimate(atoms, radii).slope) < 1e-12);
  CHECK_THROWS_AS(correlation_dimension_estimate(xs, {0.1, 0.01, 0.001}), Error);
  CHECK_THROWS_AS(correlation_dimension_estimate(std::vector<double>(10, 0.0), radii), Error);
}

TEST_CASE("planar correlation counts match all pairs") {
  const auto pts = uniform_points(1500, 6, false);
  const auto radii = geometric_radii(0.2, 0.02, 4);
  const auto est = correlation_dimension_estimate(pts, radii);
  const double pairs = 1500.0 * 1499.0 / 2.0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(est.values[i] == doctest::Approx(static_cast<double>(reference::close_pairs(pts, radii[i])) / pairs));
}

TEST_CASE("strong stable distribution: correlation dimension near the closed form") {
  const auto cfg = builtin_example("sec44");
  const auto w = BernoulliWeights::uniform(3);
  const auto split = certify_splitting(cfg.system);
  const auto samples = sample_nu_ss(cfg.system, w, split, 300, 5000, 3);
  std::vector<double> slopes;
  for (const auto& p : samples) slopes.push_back(std::tan(p.theta()));  // y/x slopes, the direction IFS coordinate
  const auto ex = lyapunov_triangular(cfg.system, w);
  const double closed = ex.entropy / (ex.chi_ss - ex.chi_s);
  const auto est = correlation_dimension_estimate(slopes, geometric_radii(0.5, 0.002, 10));
  CHECK(std::abs(est.slope - closed) < 0.1);
}
