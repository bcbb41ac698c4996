#pragma once

// Raster images of attractors as binary P6 pixmaps.

#include <cstdint>
#include <string>
#include <vector>

#include "affdim/ifs.hpp"

namespace affdim {

struct Viewport {
  double x_min = 0.0, y_min = 0.0, x_max = 1.0, y_max = 1.0;
};

enum class RenderMode { Cylinders, Chaos };

struct RenderSpec {
  int width = 512;
  int height = 512;
  Viewport viewport;
  RenderMode mode = RenderMode::Cylinders;
  int depth = 6;              ///< cylinders: word length; chaos: iterations per point
  std::size_t count = 200000;  ///< chaos: number of points
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument unless width, height lie in [16, 8192] and the
/// viewport has positive extent.
void validate(const RenderSpec& spec);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  ///< row-major, top row first
};

/// Cylinders: fills f_w(polygon) for |w| = depth in the color of w's first
/// symbol (throws UnsupportedDepth beyond 2e6 words). Chaos: plots sampled
/// points f_{w_1} o ... o f_{w_depth}(0) colored by w_1.
Image render(const IfsSystem& sys, const BernoulliWeights& weights, const Polygon& polygon, const RenderSpec& spec);

std::string to_p6(const Image& img);
/// 64-bit FNV-1a of a byte string, used for golden images.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace affdim
