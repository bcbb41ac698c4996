#include <doctest.h>

#include <cmath>

#include "affdim/error.hpp"
#include "affdim/linalg2.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

namespace {

// brute-force max and min of |M v| over a fine grid of unit vectors
SingularPair sampled_singular_values(const Mat2& m) {
  double hi = 0.0, lo = 1e300;
  for (int k = 0; k < 200000; ++k) {
    const double t = kPi * k / 200000.0;
    const double r = norm(m * Vec2{std::cos(t), std::sin(t)});
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return {hi, lo};
}

}  // namespace

TEST_CASE("singular values of simple matrices") {
  const auto d = singular_values(Mat2::diag(3.0, -0.5));
  CHECK(d.alpha1 == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(d.alpha2 == doctest::Approx(0.5).epsilon(1e-15));
  const auto r = singular_values(Mat2::rotation(0.7));
  CHECK(r.alpha1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.alpha2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(singular_values(Mat2{0.0, 0.0, 0.0, 0.0}), Error);
  CHECK(operator_norm(Mat2{0.0, 2.0, 0.0, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("singular values against a sampled sweep") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    Gen g(7, k);
    const Mat2 m = g.matrix(2.0);
    const auto sv = singular_values(m);
    const auto oracle = sampled_singular_values(m);
    CHECK(sv.alpha1 == doctest::Approx(oracle.alpha1).epsilon(1e-6));
    CHECK(sv.alpha2 == doctest::Approx(oracle.alpha2).epsilon(1e-4));
    CHECK(sv.alpha1 * sv.alpha2 == doctest::Approx(std::abs(m.det())).epsilon(1e-12));
    CHECK(operator_norm(m) == doctest::Approx(sv.alpha1).epsilon(1e-15));
  }
}

TEST_CASE("nearly singular matrices keep alpha2 accurate") {
  const Mat2 m{1.0, 1.0, 1.0, 1.0 + 1e-12};
  const auto sv = singular_values(m);
  CHECK(sv.alpha1 * sv.alpha2 == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("phi^s pieces") {
  const SingularPair sv{0.5, 0.2};
  CHECK(phi_s(sv, 0.0) == 1.0);
  CHECK(phi_s(sv, 0.5) == doctest::Approx(std::sqrt(0.5)));
  CHECK(phi_s(sv, 1.0) == doctest::Approx(0.5));
  CHECK(phi_s(sv, 1.5) == doctest::Approx(0.5 * std::sqrt(0.2)));
  CHECK(phi_s(sv, 2.0) == doctest::Approx(0.1));
  CHECK(phi_s(sv, 3.0) == doctest::Approx(std::pow(0.1, 1.5)));
  CHECK_THROWS_AS(phi_s(sv, -0.1), Error);
  CHECK(std::exp(log_phi_s(std::log(0.5), std::log(0.2), 1.3)) == doctest::Approx(phi_s(sv, 1.3)));
}

TEST_CASE("inverse") {
  const Mat2 m{2.0, 1.0, -1.0, 3.0};
  const Mat2 p = m * m.inverse();
  CHECK(p.a11 == doctest::Approx(1.0));
  CHECK(p.a12 == doctest::Approx(0.0));
  CHECK(p.a21 == doctest::Approx(0.0));
  CHECK(p.a22 == doctest::Approx(1.0));
  try {
    (void)Mat2{1.0, 2.0, 2.0, 4.0}.inverse();
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("projective points") {
  CHECK(ProjPoint(kPi).theta() == 0.0);
  CHECK(ProjPoint(-0.25).theta() == doctest::Approx(kPi - 0.25));
  CHECK(proj_metric(ProjPoint(0.1), ProjPoint(0.1 + kPi)) < 1e-15);
  CHECK(proj_metric(ProjPoint(0.0), ProjPoint(kPi / 2)) == doctest::Approx(1.0));
  CHECK(ProjPoint::from_slope(1.0).theta() == doctest::Approx(kPi / 4));
  CHECK(ProjPoint::from_vector({-1.0, -1.0}).theta() == doctest::Approx(kPi / 4));
  CHECK(ccw_offset(ProjPoint(3.0), ProjPoint(0.1)) == doctest::Approx(0.1 + kPi - 3.0));
  const auto q = proj_act(Mat2::diag(2.0, 1.0), ProjPoint(kPi / 4));
  CHECK(std::tan(q.theta()) == doctest::Approx(0.5));
}

TEST_CASE("arcs") {
  const ProjArc a(ProjPoint(3.0), ProjPoint(0.2));  // wraps through 0
  CHECK(a.length() == doctest::Approx(0.2 + kPi - 3.0));
  CHECK(a.contains(ProjPoint(0.1)));
  CHECK(a.contains(ProjPoint(3.1)));
  CHECK_FALSE(a.contains(ProjPoint(1.0)));
  CHECK(a.contains(ProjPoint(0.21), 0.02));
  const ProjArc inner = ProjArc::centered(a.midpoint(), 0.05);
  CHECK(a.clearance(inner) > 0.0);
  CHECK(a.overlaps(inner));
  CHECK_FALSE(a.overlaps(ProjArc(ProjPoint(1.0), ProjPoint(1.5))));
  CHECK(a.inflated(0.01).length() == doctest::Approx(a.length() + 0.02));

  // a contraction towards the x axis maps a cone around it strictly inside
  const ProjArc cone = ProjArc::centered(ProjPoint(0.0), 0.5);
  const ProjArc img = arc_image(Mat2::diag(1.0, 0.3), cone);
  CHECK(cone.clearance(img) > 0.0);
  CHECK(img.length() < cone.length());
}
