#include <doctest.h>

#include <cmath>

#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/render.hpp"

using namespace affdim;

namespace {

std::size_t non_white(const Image& img) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.rgb.size(); i += 3)
    if (img.rgb[i] != 255 || img.rgb[i + 1] != 255 || img.rgb[i + 2] != 255) ++n;
  return n;
}

}  // namespace

TEST_CASE("spec validation") {
  RenderSpec s;
  s.width = 8;
  CHECK_THROWS_AS(validate(s), Error);
  s.width = 64;
  s.viewport = {0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(validate(s), Error);
  s.viewport = {};
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("single map, chaos mode: every point at the fixed point") {
  // fixed point of x -> x/2 + (1/4, 1/2) is (1/2, 1)
  const IfsSystem sys({AffineMap{Mat2::diag(0.5, 0.5), {0.25, 0.5}}});
  RenderSpec s;
  s.width = s.height = 64;
  s.viewport = {0.0, 0.0, 2.0, 2.0};
  s.mode = RenderMode::Chaos;
  s.depth = 60;
  s.count = 1000;
  const Image img = render(sys, BernoulliWeights::uniform(1), unit_square(), s);
  CHECK(non_white(img) == 1);
  // (1/2, 1) lands in column 16, row 32 counted from the top
  const std::size_t at = (32u * 64u + 16u) * 3u;
  CHECK(img.rgb[at] != 255);
}

TEST_CASE("viewport away from the attractor gives a blank image") {
  const auto cfg = builtin_example("phi-c");
  RenderSpec s;
  s.width = s.height = 32;
  s.viewport = {5.0, 5.0, 6.0, 6.0};
  const Image a = render(cfg.system, BernoulliWeights::uniform(6), unit_square(), s);
  CHECK(non_white(a) == 0);
  s.mode = RenderMode::Chaos;
  s.count = 5000;
  CHECK(non_white(render(cfg.system, BernoulliWeights::uniform(6), unit_square(), s)) == 0);
}

TEST_CASE("depth cap") {
  const auto cfg = builtin_example("phi-c");
  RenderSpec s;
  s.depth = 9;
  try {
    render(cfg.system, BernoulliWeights::uniform(6), unit_square(), s);
    FAIL("expected UnsupportedDepth");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDepth);
  }
}

TEST_CASE("P6 layout") {
  Image img{16, 16, std::vector<std::uint8_t>(16 * 16 * 3, 7)};
  const std::string p6 = to_p6(img);
  CHECK(p6.rfind("P6\n16 16\n255\n", 0) == 0);
  CHECK(p6.size() == 13 + 16 * 16 * 3);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("sub-pixel cylinders are still drawn") {
  const IfsSystem sys({AffineMap{Mat2::diag(0.001, 0.001), {0.51, 0.51}}});
  RenderSpec s;
  s.width = s.height = 64;
  s.depth = 1;
  CHECK(non_white(render(sys, BernoulliWeights::uniform(1), unit_square(), s)) == 1);
}

TEST_CASE("golden image: phi-c, c = 1/4, cylinders at depth 6") {
  const auto cfg = builtin_example("phi-c", {{"c", "1/4"}});
  RenderSpec s;  // 512 x 512, unit square viewport
  const std::string p6 = to_p6(render(cfg.system, BernoulliWeights::uniform(6), unit_square(), s));
  CHECK(fnv1a64(p6) == 0x73bcd881d9b8ad51ULL);
}

TEST_CASE("golden image: chaos mode is reproducible") {
  const auto cfg = builtin_example("sec44");
  RenderSpec s;
  s.width = s.height = 256;
  s.viewport = {0.0, -1.0, 38.0 / 27.0, 1.0};
  s.mode = RenderMode::Chaos;
  s.depth = 30;
  s.count = 100000;
  s.seed = 7;
  const auto a = to_p6(render(cfg.system, BernoulliWeights::uniform(3), *cfg.polygon, s));
  const auto b = to_p6(render(cfg.system, BernoulliWeights::uniform(3), *cfg.polygon, s));
  CHECK(a == b);
  CHECK(fnv1a64(a) == 0x3f08c6a25b4dbf2aULL);
}
