#include <doctest.h>

#include <cmath>

#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/hochman.hpp"
#include "affdim/reference.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

TEST_CASE("binary IFS: Delta_n = 2^-n exactly") {
  const LineIfs ifs = parse_line_ifs("1/2,0;1/2,1/2");
  for (int n = 1; n <= 10; ++n) {
    const auto d = delta_n(ifs, n);
    REQUIRE(d.exact);
    CHECK(*d.exact == Rational(1, 1 << n));
  }
  const auto rep = hochman_rate(ifs, 6);
  CHECK(rep.verdict == HochmanVerdict::TrendBounded);
  CHECK(rep.rows.back().rate == doctest::Approx(std::log(2.0)));
}

TEST_CASE("repeated maps overlap exactly at n = 1") {
  const LineIfs ifs = parse_line_ifs("1/3,0;1/3,0;1/3,2/3");
  CHECK(delta_n(ifs, 1).zero());
  const auto rep = hochman_rate(ifs, 3);
  CHECK(rep.verdict == HochmanVerdict::ExactOverlap);
  CHECK(std::isinf(rep.rows.front().rate));
}

TEST_CASE("distinct ratios never collide") {
  const LineIfs ifs = parse_line_ifs("1/2,0;1/3,1/2");
  const auto d = delta_n(ifs, 1);
  CHECK(d.infinite);
  CHECK(d.to_string() == "inf");
  // at n = 2 the words 01 and 10 share the ratio 1/6
  CHECK_FALSE(delta_n(ifs, 2).infinite);
}

TEST_CASE("sorted adjacent differences equal the pairwise oracle") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    Gen g(41, k);
    const LineIfs ifs = affdim::testing::random_rational_line_ifs(g);
    for (int n = 1; n <= 5; ++n) {
      const auto fast = delta_n(ifs, n);
      const auto slow = reference::delta_n_pairwise(*ifs.exact(), n);
      CHECK(fast.infinite == !slow.has_value());
      if (slow) CHECK(*fast.exact == *slow);
      // float mode agrees up to rounding
      const auto fl = delta_n(ifs, n, false);
      if (slow) CHECK(fl.value == doctest::Approx(to_double(*slow)).epsilon(1e-9));
    }
  }
}

TEST_CASE("float inputs never get a bounded verdict") {
  const LineIfs ifs(std::vector<LineMap>{{0.5, 0.0}, {0.5, 0.5}});
  const auto rep = hochman_rate(ifs, 4, false);
  CHECK_FALSE(rep.exact);
  CHECK(rep.verdict == HochmanVerdict::Inconclusive);
}

TEST_CASE("line IFS from planar systems") {
  const auto dir = direction_ifs(builtin_example("sec44").system);
  REQUIRE(dir.exact());
  const auto& e = *dir.exact();
  REQUIRE(e.size() == 3);
  for (const auto& m : e) CHECK(m.beta == Rational(8, 27));
  CHECK(e[0].gamma == Rational(1));
  CHECK(e[1].gamma == Rational(0));
  CHECK(e[2].gamma == Rational(-1));

  const auto hor = horizontal_ifs(phi_c_system(Rational(1, 4)));
  const auto merged = merge_duplicates(hor, std::vector<double>(6, 1.0 / 6));
  CHECK(merged.ifs.size() == 3);
  CHECK(merged.weights[0] == doctest::Approx(1.0 / 3));
  CHECK(merged.class_of[0] == merged.class_of[1]);
}

TEST_CASE("parsing and validation") {
  CHECK_THROWS_AS(parse_line_ifs("1,0"), Error);
  CHECK_THROWS_AS(parse_line_ifs("1/2"), Error);
  CHECK_THROWS_AS(parse_line_ifs("0,1"), Error);
  CHECK(parse_line_ifs("-1/2,1;1/4,0").min_abs_beta() == doctest::Approx(0.25));
  CHECK_THROWS_AS(delta_n(parse_line_ifs("1/2,0;1/2,1/2"), 30), Error);
}
