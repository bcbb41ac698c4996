#pragma once

// IFS configuration files and the built-in example library.
//
// Grammar (line oriented, '#' starts a comment, blank lines ignored):
//
//   label = <text>
//   [maps]                 one row per map: a11 a12 a21 a22 t1 t2
//   [weights]              one row: p_1 ... p_N
//   [polygon]              one vertex per row: x y (convex, counterclockwise)
//   [forward_cone]         one arc per row: start end (radians, ccw)
//   [backward_cone]        as forward_cone
//   [subsystem]            exclude = <1-based symbols>
//                          depths = <list of depths>
//
// Numbers are integers, p/q fractions or decimals with optional exponent; all
// are read as exact rationals. Arc angles are read as doubles.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affdim/ifs.hpp"
#include "affdim/splitting.hpp"

namespace affdim {

struct SubsystemSpec {
  std::vector<std::size_t> exclude;  ///< 0-based symbols
  std::vector<int> depths;
};

struct SystemConfig {
  IfsSystem system;
  std::optional<BernoulliWeights> weights;
  std::optional<std::vector<Rational>> exact_weights;
  std::optional<Polygon> polygon;
  std::optional<Multicone> forward_cone;
  std::optional<Multicone> backward_cone;
  std::optional<SubsystemSpec> subsystem;
};

/// Throws ParseError naming the line on malformed input.
SystemConfig parse_system(std::string_view text);
std::string serialize_system(const SystemConfig& cfg);
SystemConfig load_system_file(const std::string& path);

using ParamMap = std::map<std::string, std::string>;

std::vector<std::string> example_names();
/// sec44, phi-c (param c, default 1/4) and hl-demo.
SystemConfig builtin_example(const std::string& name, const ParamMap& params = {});

/// The parameterised six-map family on the unit square, 0 < c < 1/2.
IfsSystem phi_c_system(const Rational& c);

}  // namespace affdim
