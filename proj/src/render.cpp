#include "affdim/render.hpp"

#include <array>
#include <cmath>

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"
#include "affdim/rng.hpp"

namespace affdim {

namespace {

constexpr std::size_t kRenderCap = 2'000'000;

constexpr std::array<std::array<std::uint8_t, 3>, 8> kPalette{{
    {{31, 119, 180}},
    {{214, 39, 40}},
    {{44, 160, 44}},
    {{255, 127, 14}},
    {{148, 103, 189}},
    {{23, 190, 207}},
    {{140, 86, 75}},
    {{188, 189, 34}},
}};

struct Raster {
  const RenderSpec& spec;
  double sx, sy;

  explicit Raster(const RenderSpec& s)
      : spec(s),
        sx(s.width / (s.viewport.x_max - s.viewport.x_min)),
        sy(s.height / (s.viewport.y_max - s.viewport.y_min)) {}

  /// Pixel coordinates, y growing downwards.
  Vec2 to_pixel(Vec2 p) const { return {(p.x - spec.viewport.x_min) * sx, (spec.viewport.y_max - p.y) * sy}; }
};

void put(Image& img, int x, int y, std::size_t color) {
  const auto& c = kPalette[color % kPalette.size()];
  const std::size_t at = (static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(x)) * 3;
  img.rgb[at] = c[0];
  img.rgb[at + 1] = c[1];
  img.rgb[at + 2] = c[2];
}

struct Piece {
  std::vector<Vec2> px;  ///< polygon in pixel coordinates
  double y_lo, y_hi;
  std::size_t color;
};

/// Pixels of row y met by the convex polygon. Deep cylinders are thinner than
/// a pixel, so sampling only pixel centers would drop most of them.
void fill_row(Image& img, const Piece& p, int y) {
  const double top = y, bottom = y + 1.0;
  double lo = 1e300, hi = -1e300;
  auto take = [&](double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  };
  const std::size_t n = p.px.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = p.px[i], b = p.px[(i + 1) % n];
    if (top <= a.y && a.y <= bottom) take(a.x);
    for (double cy : {top, bottom})
      if ((a.y < cy && cy < b.y) || (b.y < cy && cy < a.y)) take(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  if (lo > hi) return;
  const int x0 = std::max(0, static_cast<int>(std::floor(lo)));
  const int x1 = std::min(img.width - 1, std::max(static_cast<int>(std::floor(lo)), static_cast<int>(std::ceil(hi)) - 1));
  for (int x = x0; x <= x1; ++x) put(img, x, y, p.color);
}

}  // namespace

void validate(const RenderSpec& spec) {
  if (spec.width < 16 || spec.width > 8192 || spec.height < 16 || spec.height > 8192)
    throw Error(ErrorCode::InvalidArgument, "image size must lie in [16, 8192]");
  if (!(spec.viewport.x_max > spec.viewport.x_min) || !(spec.viewport.y_max > spec.viewport.y_min))
    throw Error(ErrorCode::InvalidArgument, "degenerate viewport");
  if (spec.depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
}

Image render(const IfsSystem& sys, const BernoulliWeights& weights, const Polygon& polygon, const RenderSpec& spec) {
  validate(spec);
  Image img{spec.width, spec.height, std::vector<std::uint8_t>(static_cast<std::size_t>(spec.width) * spec.height * 3, 255)};
  const Raster ras(spec);

  if (spec.mode == RenderMode::Chaos) {
    if (weights.size() != sys.size()) throw Error(ErrorCode::InvalidArgument, "weights do not match the system");
    const SymbolSampler sampler(weights.p());
    std::vector<Vec2> pts(spec.count);
    std::vector<std::size_t> first(spec.count);
    const auto n = static_cast<std::int64_t>(spec.count);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      CounterStream rng(spec.seed, static_cast<std::uint64_t>(k));
      Vec2 x{};
      std::size_t s = 0;
      for (int d = 0; d < spec.depth; ++d) {
        s = sampler.draw(rng);
        x = sys[s](x);
      }
      pts[static_cast<std::size_t>(k)] = x;
      first[static_cast<std::size_t>(k)] = s;
    }
    // Painted in index order so overlapping points resolve identically.
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 p = ras.to_pixel(pts[k]);
      const double fx = std::floor(p.x), fy = std::floor(p.y);
      if (fx < 0 || fy < 0 || fx >= spec.width || fy >= spec.height) continue;
      put(img, static_cast<int>(fx), static_cast<int>(fy), first[k]);
    }
    return img;
  }

  polygon.validate();
  if (std::pow(static_cast<double>(sys.size()), spec.depth) > static_cast<double>(kRenderCap))
    throw Error(ErrorCode::UnsupportedDepth, std::to_string(sys.size()) + "^" + std::to_string(spec.depth) +
                                                 " cylinders exceed the cap");
  // Cylinder polygons in odometer order of words.
  std::vector<Piece> pieces;
  std::vector<std::pair<AffineMap, std::size_t>> level{{AffineMap{Mat2::identity(), {}}, 0}};
  for (int d = 0; d < spec.depth; ++d) {
    std::vector<std::pair<AffineMap, std::size_t>> next;
    next.reserve(level.size() * sys.size());
    for (const auto& [f, c] : level)
      for (std::size_t s = 0; s < sys.size(); ++s) next.push_back({compose(f, sys[s]), d == 0 ? s : c});
    level = std::move(next);
  }
  pieces.reserve(level.size());
  for (const auto& [f, c] : level) {
    Piece p{{}, 1e300, -1e300, c};
    for (const auto& v : polygon.vertices) {
      const Vec2 q = ras.to_pixel(f(v));
      p.px.push_back(q);
      p.y_lo = std::min(p.y_lo, q.y);
      p.y_hi = std::max(p.y_hi, q.y);
    }
    pieces.push_back(std::move(p));
  }
  // Rows are independent; within a row pieces are painted in word order.
#pragma omp parallel for schedule(dynamic, 8)
  for (int y = 0; y < spec.height; ++y) {
    for (const auto& p : pieces)
      if (p.y_lo <= y + 1.0 && y <= p.y_hi) fill_row(img, p, y);
  }
  return img;
}

std::string to_p6(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace affdim
