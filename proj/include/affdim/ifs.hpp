#pragma once

// The IFS data model: affine maps, words, compositions, the natural
// projection, sampling of the self-affine measure and the strong separation
// check on a user-supplied convex polygon.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affdim/linalg2.hpp"
#include "affdim/rational.hpp"

namespace affdim {

struct AffineMap {
  Mat2 linear;
  Vec2 translation;

  Vec2 operator()(Vec2 x) const { return linear * x + translation; }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// f o g.
inline AffineMap compose(const AffineMap& f, const AffineMap& g) {
  return {f.linear * g.linear, f.linear * g.translation + f.translation};
}

/// Exact copy of an affine map, row-major a11 a12 a21 a22 and t1 t2.
struct ExactAffine {
  std::array<Rational, 4> a;
  std::array<Rational, 2> t;

  AffineMap to_double() const;
  friend bool operator==(const ExactAffine&, const ExactAffine&) = default;
};

ExactAffine compose(const ExactAffine& f, const ExactAffine& g);

/// Symbols are 0-based indices into IfsSystem::maps().
using Word = std::vector<std::size_t>;

class IfsSystem {
 public:
  IfsSystem() = default;
  /// Validates that every map is contracting and non-singular.
  explicit IfsSystem(std::vector<AffineMap> maps, std::string label = {});
  /// Exact system; the floating maps are derived from it.
  explicit IfsSystem(std::vector<ExactAffine> exact, std::string label = {});

  std::size_t size() const { return maps_.size(); }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const AffineMap& operator[](std::size_t i) const { return maps_[i]; }
  const std::optional<std::vector<ExactAffine>>& exact() const { return exact_; }
  bool has_exact() const { return exact_.has_value(); }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::vector<Mat2> linear_parts() const;
  /// a12 == 0 for every linear part.
  bool lower_triangular() const;
  /// max operator norm over the generators.
  double max_contraction() const;

 private:
  void validate() const;

  std::vector<AffineMap> maps_;
  std::optional<std::vector<ExactAffine>> exact_;
  std::string label_;
};

class BernoulliWeights {
 public:
  BernoulliWeights() = default;
  /// Requires p_i > 0 and sum within 1e-12 of one (then renormalised).
  explicit BernoulliWeights(std::vector<double> p);
  static BernoulliWeights uniform(std::size_t n);
  /// Normalises positive masses to a probability vector.
  static BernoulliWeights from_masses(const std::vector<double>& masses);

  std::size_t size() const { return p_.size(); }
  const std::vector<double>& p() const { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// Throws BadSymbol when a symbol is out of range.
void validate_word(const IfsSystem& sys, const Word& w);

/// f_{w1} o ... o f_{wn}; the empty word gives the identity.
AffineMap compose_word(const IfsSystem& sys, const Word& w);
ExactAffine compose_word_exact(const IfsSystem& sys, const Word& w);

/// Radius of a ball around `center` that contains the attractor.
double attractor_radius(const IfsSystem& sys, Vec2 center);

struct ProjectionResult {
  Vec2 point;
  double error_radius = 0.0;  ///< bound on the distance to pi_+ of any extension
};

/// f_w(seed), with the truncation bound alpha1(A_w) * R. Requires |w| >= 1.
ProjectionResult natural_projection(const IfsSystem& sys, const Word& w, Vec2 seed);

struct SampleOptions {
  int depth = 40;
  std::size_t count = 10000;
  std::uint64_t seed = 1;
  Vec2 start{};
};

/// i.i.d. points f_w(start) with w ~ weights^depth. Sample k draws its
/// symbols from CounterStream(seed, k); the first draw is the innermost map.
std::vector<Vec2> sample_measure(const IfsSystem& sys, const BernoulliWeights& weights,
                                 const SampleOptions& opt);

/// Bound on the distance of any sample to the attractor.
double sample_truncation_radius(const IfsSystem& sys, int depth, Vec2 start);

/// Exact mean of the self-affine measure, (I - sum p A)^{-1} sum p t.
Vec2 measure_mean(const IfsSystem& sys, const BernoulliWeights& weights);

/// Words of length n not lying in excluded^n, i.e. the maps f_w of the
/// sub-system used to restore strong separation.
IfsSystem subsystem_excluding(const IfsSystem& sys, int depth, const std::vector<std::size_t>& excluded);

/// The n-th iterate system {f_w : |w| = n}, words in odometer order.
IfsSystem iterate_system(const IfsSystem& sys, int depth);
BernoulliWeights iterate_weights(const BernoulliWeights& weights, int depth);

// ---------------------------------------------------------------------------
// Strong separation

struct Polygon {
  std::vector<Vec2> vertices;
  std::optional<std::vector<std::array<Rational, 2>>> exact;

  Polygon() = default;
  explicit Polygon(std::vector<Vec2> v) : vertices(std::move(v)) {}
  explicit Polygon(std::vector<std::array<Rational, 2>> v);

  Vec2 centroid() const;
  double diameter() const;
  /// Throws NonConvexPolygon unless convex, counterclockwise, >= 3 vertices.
  void validate() const;
};

Polygon unit_square();
Polygon image(const AffineMap& f, const Polygon& poly);

struct SscReport {
  bool holds = false;
  double kappa = 0.0;   ///< min distance between image polygons
  double margin = 0.0;  ///< min distance from image polygons to the boundary
  bool exact = false;   ///< verdict decided in rational arithmetic
  std::string witness;  ///< offending pair or vertex when it fails
};

/// Images of the polygon must sit inside it with margin > tolerance and be
/// pairwise separated with gap > tolerance. In exact mode (requires rational
/// maps and polygon) the verdict uses strict rational predicates.
SscReport check_ssc(const IfsSystem& sys, const Polygon& o, double tolerance = 1e-9, bool exact = false);

struct RefinedSscReport {
  bool holds = false;
  bool forward_invariant = false;  ///< f_i(closure O) within closure O
  double kappa_lower = 0.0;        ///< min separating gap among refined cylinders
  int depth_used = 0;
  std::size_t pair_tests = 0;
  std::string witness;
};

/// Separates the first-level pieces f_i(attractor) by refining cylinder
/// polygons f_w(O) up to max_depth; requires f_i(O) within O.
RefinedSscReport check_ssc_refined(const IfsSystem& sys, const Polygon& o, int max_depth = 8,
                                   double tolerance = 1e-12, std::size_t budget = 4'000'000);

/// Distance between two convex polygons (0 when they intersect).
double polygon_distance(const Polygon& a, const Polygon& b);
/// Largest separating gap along edge normals; negative when overlapping.
double sat_gap(const Polygon& a, const Polygon& b);

}  // namespace affdim
