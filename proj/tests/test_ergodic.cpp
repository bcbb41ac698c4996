#include <doctest.h>

#include <cmath>

#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/ergodic.hpp"
#include "affdim/reference.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

TEST_CASE("entropy and the determinant exponent") {
  CHECK(entropy(BernoulliWeights::uniform(6)) == doctest::Approx(std::log(6.0)));
  CHECK(entropy(BernoulliWeights({0.25, 0.75})) ==
        doctest::Approx(-(0.25 * std::log(0.25) + 0.75 * std::log(0.75))));
  const IfsSystem sys = phi_c_system(Rational(1, 4));
  CHECK(det_exponent(sys, BernoulliWeights::uniform(6)) == doctest::Approx(std::log(12.0)));
}

TEST_CASE("triangular exponents") {
  const auto t = lyapunov_triangular(builtin_example("sec44").system, BernoulliWeights::uniform(3));
  CHECK(t.chi_s == doctest::Approx(std::log(1.5)));
  CHECK(t.chi_ss == doctest::Approx(std::log(81.0 / 16.0)));
  CHECK(t.entropy == doctest::Approx(std::log(3.0)));
  CHECK(lyapunov_dimension(t) == doctest::Approx(1.0 + std::log(2.0) / std::log(81.0 / 16.0)));
  CHECK_THROWS_AS(lyapunov_triangular(builtin_example("hl-demo").system, BernoulliWeights::uniform(2)), Error);
}

TEST_CASE("Lyapunov dimension branches") {
  ExponentTriple t;
  t.entropy = 0.5;
  t.chi_s = 1.0;
  t.chi_ss = 2.0;
  CHECK(lyapunov_dimension(t) == doctest::Approx(0.5));
  t.entropy = 1.5;
  CHECK(lyapunov_dimension(t) == doctest::Approx(1.25));
  t.entropy = 10.0;
  CHECK(lyapunov_dimension(t) == 2.0);
  t.chi_s = 0.0;
  CHECK_THROWS_AS(lyapunov_dimension(t), Error);
}

TEST_CASE("Monte Carlo agrees with the serial reference bit for bit") {
  const auto cfg = builtin_example("hl-demo");
  const auto w = BernoulliWeights::uniform(cfg.system.size());
  const auto a = lyapunov_monte_carlo(cfg.system, w, 300, 64, 4);
  const auto b = reference::lyapunov_monte_carlo(cfg.system, w, 300, 64, 4);
  CHECK(a.chi_s == b.chi_s);
  CHECK(a.chi_ss == b.chi_ss);
  CHECK(a.stderr_s == b.stderr_s);
}

TEST_CASE("Monte Carlo against exact triangular exponents") {
  int within = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    Gen g(31, k);
    const IfsSystem sys = affdim::testing::random_triangular(g, k % 2 ? TriangularSplit::ADominant
                                                                       : TriangularSplit::CDominant);
    const auto w = affdim::testing::random_weights(g, sys.size());
    const auto exact = lyapunov_triangular(sys, w);
    const auto mc = lyapunov_monte_carlo(sys, w, 1000, 400, k + 1);
    if (std::abs(mc.chi_s - exact.chi_s) <= 3.0 * mc.stderr_s) ++within;
    CHECK(std::abs(mc.chi_s + mc.chi_ss - det_exponent(sys, w)) < 1e-12);
  }
  CHECK(within >= 8);
}

TEST_CASE("directional estimate of chi_s") {
  const auto cfg = builtin_example("sec44");
  const auto w = BernoulliWeights::uniform(3);
  const auto split = certify_splitting(cfg.system);
  const auto d = lyapunov_from_directions(cfg.system, w, split, 200, 4000, 2);
  CHECK(std::abs(d.chi_s - std::log(1.5)) < 4.0 * d.stderr_s + 1e-9);
}

TEST_CASE("argument checks") {
  const IfsSystem sys = phi_c_system(Rational(1, 4));
  CHECK_THROWS_AS(lyapunov_monte_carlo(sys, BernoulliWeights::uniform(6), 0, 10, 1), Error);
  CHECK_THROWS_AS(lyapunov_monte_carlo(sys, BernoulliWeights::uniform(6), 10, 1, 1), Error);
  CHECK_THROWS_AS(lyapunov_monte_carlo(sys, BernoulliWeights::uniform(5), 10, 10, 1), Error);
}
