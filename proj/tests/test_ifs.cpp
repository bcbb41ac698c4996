#include <doctest.h>

#include <cmath>
#include <functional>

#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/ifs.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

const char* kTwoMaps = R"(# two diagonal maps
label = strip
[maps]
1/2 0 0 1/3 0 0
1/2 0 0 1/3 1/2 2/3
[weights]
1/4 3/4
[polygon]
0 0
1 0
1 1
0 1
)";

}  // namespace

TEST_CASE("construction validates maps") {
  CHECK(code_of([] { IfsSystem({AffineMap{{1.5, 0.0, 0.0, 0.5}, {}}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { IfsSystem({AffineMap{{0.5, 0.5, 0.5, 0.5}, {}}}); }) == ErrorCode::SingularMatrix);
  CHECK(code_of([] { BernoulliWeights({0.5, 0.6}); }) == ErrorCode::InvalidArgument);
  CHECK(BernoulliWeights::from_masses({1.0, 3.0})[1] == doctest::Approx(0.75));
}

TEST_CASE("words compose outermost first") {
  const auto cfg = parse_system(kTwoMaps);
  const IfsSystem& sys = cfg.system;
  const AffineMap f = compose_word(sys, {1, 0});
  const AffineMap want = compose(sys[1], sys[0]);
  CHECK(f == want);
  const auto fe = compose_word_exact(sys, {1, 0});
  CHECK(fe.t[0] == Rational(1, 2));
  CHECK(fe.t[1] == Rational(2, 3));
  CHECK(code_of([&] { compose_word(sys, {0, 2}); }) == ErrorCode::BadSymbol);
  CHECK(compose_word(sys, {}) == AffineMap{Mat2::identity(), {}});
}

TEST_CASE("natural projection bound holds for extensions") {
  const auto cfg = builtin_example("sec44");
  const IfsSystem& sys = cfg.system;
  const Word w{0, 2, 1, 1, 0, 2, 2, 1};
  const auto p = natural_projection(sys, w, {});
  Word longer = w;
  for (int k = 0; k < 40; ++k) longer.push_back(static_cast<std::size_t>(k % 3));
  const auto q = natural_projection(sys, longer, {0.3, -0.2});
  CHECK(norm(p.point - q.point) <= p.error_radius + q.error_radius);
  CHECK(code_of([&] { natural_projection(sys, {}, {}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sampling is reproducible and matches the exact mean") {
  const auto cfg = parse_system(kTwoMaps);
  SampleOptions o;
  o.count = 200000;
  o.seed = 5;
  const auto a = sample_measure(cfg.system, *cfg.weights, o);
  const auto b = sample_measure(cfg.system, *cfg.weights, o);
  CHECK(a == b);
  Vec2 mean{};
  for (const auto& p : a) mean = mean + (1.0 / static_cast<double>(a.size())) * p;
  const Vec2 exact = measure_mean(cfg.system, *cfg.weights);
  // x: p2 * 1/2 / (1 - 1/2) = 3/4; y: p2 * 2/3 / (1 - 1/3) = 3/4
  CHECK(exact.x == doctest::Approx(0.75));
  CHECK(exact.y == doctest::Approx(0.75));
  CHECK(std::abs(mean.x - exact.x) < 0.005);
  CHECK(std::abs(mean.y - exact.y) < 0.005);
}

TEST_CASE("sub-systems and iterates") {
  const IfsSystem phi = phi_c_system(Rational(1, 4));
  for (int d = 1; d <= 3; ++d) {
    const auto sub = subsystem_excluding(phi, d, {3, 5});
    CHECK(sub.size() == static_cast<std::size_t>(std::pow(6, d) - std::pow(2, d)));
    CHECK(sub.has_exact());
  }
  const auto it = iterate_system(phi, 2);
  CHECK(it.size() == 36);
  CHECK(it[7] == compose(phi[1], phi[1]));
  const auto w = iterate_weights(BernoulliWeights({0.25, 0.75}), 2);
  CHECK(w.size() == 4);
  CHECK(w[1] == doctest::Approx(0.1875));
}

TEST_CASE("config parsing and serialization") {
  const auto cfg = parse_system(kTwoMaps);
  CHECK(cfg.system.size() == 2);
  CHECK(cfg.system.label() == "strip");
  CHECK(cfg.system.has_exact());
  CHECK((*cfg.system.exact())[1].t[1] == Rational(2, 3));
  CHECK((*cfg.weights)[0] == doctest::Approx(0.25));
  REQUIRE(cfg.polygon);
  CHECK(cfg.polygon->vertices.size() == 4);

  const auto again = parse_system(serialize_system(cfg));
  CHECK(*again.system.exact() == *cfg.system.exact());
  CHECK(again.weights->p() == cfg.weights->p());

  const std::string bad = "[maps]\n1/2 0 0 1/2 0 0\n1/2 0 zero 1/2 0 0\n";
  try {
    parse_system(bad);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([] { parse_system("[maps]\n1/2 0 0 1/2 0\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_system("[polygon]\n0 0\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("built-in examples") {
  CHECK(example_names() == std::vector<std::string>{"sec44", "phi-c", "hl-demo"});
  const auto s = builtin_example("sec44");
  REQUIRE(s.system.size() == 3);
  const auto& e = *s.system.exact();
  CHECK(e[0].a[0] == Rational(16, 81));
  CHECK(e[0].a[3] == Rational(2, 3));
  CHECK(e[0].t[0] == Rational(19, 54));
  CHECK(e[1].t[0] == Rational(1235, 2187));
  CHECK(e[2].t[0] == Rational(1721, 2187));
  const auto p = builtin_example("phi-c", {{"c", "0.4"}});
  CHECK(p.system.size() == 6);
  CHECK((*p.system.exact())[0].a[3] == Rational(2, 5));
  CHECK(builtin_example("hl-demo").system.size() >= 2);
  CHECK(code_of([] { builtin_example("nope"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_example("phi-c", {{"c", "3/5"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_example("phi-c", {{"d", "1"}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("polygon validation") {
  CHECK_NOTHROW(unit_square().validate());
  const Polygon cw(std::vector<Vec2>{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(code_of([&] { cw.validate(); }) == ErrorCode::NonConvexPolygon);
  CHECK(unit_square().diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("separating gaps") {
  const Polygon a(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Polygon b(std::vector<Vec2>{{1.5, 0}, {2.5, 0}, {2.5, 1}, {1.5, 1}});
  const Polygon c(std::vector<Vec2>{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}});
  CHECK(sat_gap(a, b) == doctest::Approx(0.5));
  CHECK(polygon_distance(a, b) == doctest::Approx(0.5));
  CHECK(sat_gap(a, c) < 0.0);
  CHECK(polygon_distance(a, c) == 0.0);
  const Polygon d(std::vector<Vec2>{{2, 2}, {3, 2}, {3, 3}, {2, 3}});
  CHECK(polygon_distance(a, d) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("strong separation on the worked examples") {
  const auto s = builtin_example("sec44");
  const auto r = check_ssc(s.system, *s.polygon);
  CHECK(r.holds);
  CHECK(r.kappa > 0.0);
  CHECK(r.margin > 0.0);
  const auto re = check_ssc(s.system, *s.polygon, 0.0, true);
  CHECK(re.holds);
  CHECK(re.exact);

  const IfsSystem phi = phi_c_system(Rational(1, 4));
  const auto f = check_ssc(phi, unit_square());
  CHECK_FALSE(f.holds);
  CHECK_FALSE(f.witness.empty());
  CHECK_FALSE(check_ssc(phi, unit_square(), 0.0, true).holds);
  CHECK_FALSE(check_ssc_refined(phi, unit_square()).holds);

  const auto sub = subsystem_excluding(phi, 2, {3, 5});
  const auto rs = check_ssc_refined(sub, unit_square());
  CHECK(rs.forward_invariant);
  CHECK(rs.holds);
  CHECK(rs.kappa_lower > 0.0);
}

TEST_CASE("strong separation implies disjoint depth-2 cylinders") {
  int tested = 0;
  for (std::uint64_t k = 0; tested < 10 && k < 200; ++k) {
    Gen g(11, k);
    const IfsSystem sys = affdim::testing::random_grid_system(g);
    if (!check_ssc(sys, unit_square()).holds) continue;
    ++tested;
    const auto cyl = affdim::testing::cylinders(sys, unit_square(), 2);
    for (std::size_t i = 0; i < cyl.size(); ++i)
      for (std::size_t j = i + 1; j < cyl.size(); ++j) CHECK(sat_gap(cyl[i], cyl[j]) > 0.0);
  }
  CHECK(tested == 10);
}
