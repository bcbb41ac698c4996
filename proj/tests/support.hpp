#pragma once

// Random generators and small helpers shared by the test programs and the
// acceptance runner. Every generator is a pure function of its stream.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "affdim/hochman.hpp"
#include "affdim/ifs.hpp"
#include "affdim/rng.hpp"
#include "affdim/splitting.hpp"

namespace affdim::testing {

class Gen {
 public:
  Gen(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  /// Integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    return lo + static_cast<long long>(rng_.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double sign() { return rng_.uniform() < 0.5 ? -1.0 : 1.0; }
  Mat2 matrix(double scale) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

 private:
  CounterStream rng_;
};

/// Lower triangular system with N in {2, 3}, |a_i| > |c_i| for every map
/// (ADominant) or the reverse, moderate off-diagonal entries.
IfsSystem random_triangular(Gen& g, TriangularSplit kind);
BernoulliWeights random_weights(Gen& g, std::size_t n);

/// Rational line IFS with 2 or 3 maps drawn from a small pool of ratios, so
/// that equal contraction ratios occur often.
LineIfs random_rational_line_ifs(Gen& g);

/// Rational system mapping the unit square into distinct cells of a 3x3 grid
/// with random shears; most draws satisfy the strong separation check.
IfsSystem random_grid_system(Gen& g);

/// All f_w(o), |w| = depth, in odometer order.
std::vector<Polygon> cylinders(const IfsSystem& sys, const Polygon& o, int depth);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};
/// Runs a shell command, capturing standard output.
CommandResult run_command(const std::string& command);

/// Parses "[section]" headers and "key: value" lines of an analysis report;
/// repeated keys keep the first value. "quantity: x = v" is stored as
/// "quantity:x" -> v.
std::map<std::string, std::map<std::string, std::string>> parse_report(const std::string& text);

}  // namespace affdim::testing
