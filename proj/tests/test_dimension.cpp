#include <doctest.h>

#include <cmath>

#include "affdim/config.hpp"
#include "affdim/dimension.hpp"
#include "affdim/error.hpp"
#include "affdim/report.hpp"
#include "support.hpp"

using namespace affdim;
using affdim::testing::Gen;

namespace {

AnalyzeOptions options_of(const SystemConfig& cfg) {
  AnalyzeOptions o;
  o.weights = cfg.weights;
  o.polygon = cfg.polygon;
  o.forward_cone = cfg.forward_cone;
  o.backward_cone = cfg.backward_cone;
  o.subsystem = cfg.subsystem;
  return o;
}

const double kSec44 = 1.0 + std::log(2.0) / std::log(81.0 / 16.0);

}  // namespace

TEST_CASE("formula helpers") {
  CHECK(ly_dimension_formula(1.0, 0.5, 0.5, 0.3) == doctest::Approx(2.0));
  CHECK(ly_dimension_formula(1.0, 1.0, 2.0, 0.5) == doctest::Approx(0.75));
  CHECK_THROWS_AS(ly_dimension_formula(1.0, 2.0, 1.0, 0.5), Error);
  CHECK_THROWS_AS(ly_dimension_formula(1.0, 1.0, 2.0, 1.5), Error);
  CHECK(lower_bound_iteration(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(lower_bound_iteration(1.0, 1.0, 4.0) == doctest::Approx(0.5));
  CHECK(lower_bound_iteration(1.0, 1.0, 1.5) == doctest::Approx(1.0));
}

TEST_CASE("worked example fires the application theorem") {
  const auto cfg = builtin_example("sec44");
  const auto r = analyze(cfg.system, options_of(cfg));
  CHECK(r.measure.fired == FiredTheorem::App);
  REQUIRE(r.measure.certified());
  CHECK(std::abs(*r.measure.certified_value - kSec44) < 1e-9);
  const auto sum = r.measure.quantity("dim_nu_ss_plus_2h_over_chi_ss");
  REQUIRE(sum);
  CHECK(*sum > 2.0);
  CHECK(*sum == doctest::Approx(std::log(3.0) / std::log(27.0 / 8.0) + 2.0 * std::log(3.0) / std::log(81.0 / 16.0)));
  REQUIRE(r.attractor);
  REQUIRE(r.attractor->certified_value);
  CHECK(std::abs(*r.attractor->certified_value - kSec44) < 1e-9);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("Hueter-Lalley instance") {
  const auto cfg = builtin_example("hl-demo");
  const auto hl = hueter_lalley_check(cfg.system, cfg.polygon, cfg.forward_cone, cfg.backward_cone);
  CHECK(hl.all_verified());
  auto o = options_of(cfg);
  o.attractor = false;
  const auto r = analyze(cfg.system, o);
  CHECK(r.measure.fired == FiredTheorem::HueterLalley);
  REQUIRE(r.measure.certified());
  CHECK(*r.measure.certified_value == doctest::Approx(r.exponents.entropy / r.exponents.chi_s));
}

TEST_CASE("phi-c without separation falls back to the upper bound") {
  const auto cfg = builtin_example("phi-c", {{"c", "1/4"}});
  auto o = options_of(cfg);
  o.attractor = false;
  const auto r = analyze(cfg.system, o);
  CHECK(r.measure.fired == FiredTheorem::PressureUpperBound);
  CHECK_FALSE(r.measure.certified());
  CHECK(r.measure.upper == doctest::Approx(1.5));
  CHECK(r.exit_code() == 2);
}

TEST_CASE("phi-c attractor through separated sub-systems") {
  const auto cfg = builtin_example("phi-c", {{"c", "1/4"}});
  const auto r = analyze(cfg.system, options_of(cfg));
  REQUIRE(r.attractor);
  const auto& a = *r.attractor;
  REQUIRE(a.subsystem_rows.size() == 3);
  // dim_T = log(3^n - 1)/(n log 3), dim = dim_T + (log 2 - ... ) from the LY formula
  for (const auto& row : a.subsystem_rows) {
    CHECK(row.ssc_holds);
    CHECK(row.report.fired == FiredTheorem::LYFormula);
    const double n = row.depth;
    const double dim_t = std::log(std::pow(3.0, n) - 1.0) / (n * std::log(3.0));
    const double h = std::log(std::pow(6.0, n) - std::pow(2.0, n)) / n;
    const double want = h / std::log(4.0) + (1.0 - std::log(3.0) / std::log(4.0)) * dim_t;
    REQUIRE(row.report.certified());
    CHECK(*row.report.certified_value == doctest::Approx(want).epsilon(1e-12));
  }
  REQUIRE(a.certified_value);
  CHECK(std::abs(*a.certified_value - 1.5) < 1e-12);
}

TEST_CASE("rotation-rich system gives an interval") {
  const IfsSystem sys({AffineMap{0.45 * Mat2::rotation(1.0), {}}, AffineMap{0.4 * Mat2::rotation(2.2), {0.5, 0.3}},
                       AffineMap{{0.3, 0.1, -0.1, 0.35}, {0.2, 0.6}}});
  AnalyzeOptions o;
  o.mc_n = 300;
  o.mc_trials = 200;
  o.attractor = false;
  const auto r = analyze(sys, o);
  CHECK(r.split.verdict != SplitVerdict::Certified);
  CHECK(r.measure.fired == FiredTheorem::PressureUpperBound);
  CHECK_FALSE(r.measure.certified());
  CHECK(r.measure.lower <= r.measure.upper);
  CHECK(r.exit_code() == 2);
}

TEST_CASE("certified values never exceed the pressure bound") {
  for (std::uint64_t k = 0; k < 12; ++k) {
    Gen g(51, k);
    const IfsSystem sys = affdim::testing::random_triangular(g, k % 2 ? TriangularSplit::ADominant
                                                                       : TriangularSplit::CDominant);
    AnalyzeOptions o;
    o.weights = affdim::testing::random_weights(g, sys.size());
    o.polygon = unit_square();
    o.empirical = false;
    const auto r = analyze(sys, o);
    if (r.measure.certified()) CHECK(*r.measure.certified_value <= r.pressure_upper + 1e-9);
    if (r.attractor && r.attractor->certified_value) CHECK(*r.attractor->certified_value <= r.pressure_upper + 1e-9);
    CHECK(r.measure.upper <= r.pressure_upper + 1e-12);
  }
}

TEST_CASE("reports are deterministic") {
  const auto cfg = builtin_example("hl-demo");
  const auto w = BernoulliWeights::uniform(cfg.system.size());
  AnalyzeOptions o = options_of(cfg);
  o.seed = 3;
  const auto a = format_analysis(analyze(cfg.system, o), w);
  const auto b = format_analysis(analyze(cfg.system, o), w);
  CHECK(a == b);
  CHECK(a.find("exit: 0") != std::string::npos);
  const auto j = analysis_json(analyze(cfg.system, o), w);
  CHECK(j.contains("measure"));
}
