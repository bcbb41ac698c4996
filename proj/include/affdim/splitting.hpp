#pragma once

// Dominated splitting: certification through the triangular criterion,
// positivity or an invariant multicone, and the invariant direction fields
// e_s / e_ss together with the distribution of strong stable directions.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "affdim/ifs.hpp"
#include "affdim/linalg2.hpp"

namespace affdim {

/// Finite union of pairwise disjoint closed arcs.
class Multicone {
 public:
  Multicone() = default;
  /// Throws InvalidArgument if arcs overlap or the total length reaches pi.
  explicit Multicone(std::vector<ProjArc> arcs);

  const std::vector<ProjArc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  double total_length() const;
  bool contains(ProjPoint p, double slack = 0.0) const;
  /// Best clearance of `inner` over the arcs; negative when it fits in none.
  double clearance(const ProjArc& inner) const;
  /// Closure of the complement. Only defined for a single arc.
  Multicone complement() const;

 private:
  std::vector<ProjArc> arcs_;
};

enum class TriangularSplit { ADominant, CDominant, None };
enum class SplitVerdict { Certified, Refuted, Unknown };
enum class SplitMethod { Triangular, Positivity, MulticoneCheck };

std::string_view to_string(TriangularSplit t);
std::string_view to_string(SplitVerdict v);
std::string_view to_string(SplitMethod m);

struct SplitReport {
  SplitVerdict verdict = SplitVerdict::Unknown;
  SplitMethod method = SplitMethod::MulticoneCheck;
  TriangularSplit triangular = TriangularSplit::None;
  Multicone multicone;  ///< forward invariant multicone when certified
  double margin = 0.0;  ///< min angular clearance of the images
  std::string note;
};

/// |a_i| > |c_i| for all i, |a_i| < |c_i| for all i, or neither.
/// Throws NotTriangular unless every a12 is zero.
TriangularSplit check_triangular_split(const IfsSystem& sys);

/// Certified iff every A_i maps every arc of m into m with clearance >=
/// margin (and > 0). A failure refutes this multicone only.
SplitReport check_multicone_invariance(const std::vector<Mat2>& mats, const Multicone& m, double margin = 1e-12);

/// Explicit forward cone for a dominated triangular family.
Multicone triangular_forward_cone(const std::vector<Mat2>& mats, TriangularSplit kind);

/// Provable obstruction: a product of length <= depth whose eigenvalues have
/// equal modulus. Returns a description of the word when found.
std::optional<std::string> equal_modulus_obstruction(const std::vector<Mat2>& mats, int depth = 2);

/// Heuristic forward multicone from clustered sampled e_s directions.
std::optional<Multicone> propose_multicone(const std::vector<Mat2>& mats, std::uint64_t seed = 1);

/// Tries the triangular criterion, positivity, the user multicone and an
/// automatic proposal in this order.
SplitReport certify_splitting(const IfsSystem& sys, const std::optional<Multicone>& user_cone = {});

struct DirectionOptions {
  double tol = 1e-12;
  int max_iter = 10000;
};

/// e_ss of the one-sided word starting with prefix, by iterating inverse
/// matrices on a seed of the backward cone. Throws PrefixTooShort when the
/// prefix ends before successive iterates agree within tol.
ProjPoint strong_stable_direction(const IfsSystem& sys, const Word& prefix, double tol,
                                  const Multicone& backward_cone);

/// e_ss of a CDominant lower triangular system from the slope series.
/// Throws PrefixTooShort when the geometric tail bound exceeds tol.
ProjPoint strong_stable_series(const IfsSystem& sys, const Word& prefix, double tol);

/// e_s of the past (i_{-1}, i_{-2}, ...) given as suffix, by forward products.
ProjPoint stable_direction(const IfsSystem& sys, const Word& suffix, double tol, const Multicone& forward_cone);

/// Same as above with symbols produced on demand; at most max_iter symbols.
ProjPoint strong_stable_direction(const IfsSystem& sys, const std::function<std::size_t()>& next_symbol,
                                  const DirectionOptions& opt, const Multicone& backward_cone);
ProjPoint stable_direction(const IfsSystem& sys, const std::function<std::size_t()>& next_symbol,
                           const DirectionOptions& opt, const Multicone& forward_cone);

/// Backward cone to seed e_ss iterations for a certified split.
Multicone backward_seed_cone(const SplitReport& split);

/// count samples of e_ss(w), w ~ weights^depth. Sample k uses
/// CounterStream(seed, k). Throws NotCertified unless split is certified.
std::vector<ProjPoint> sample_nu_ss(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                                    int depth, std::size_t count, std::uint64_t seed);
std::vector<ProjPoint> sample_e_s(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                                  int depth, std::size_t count, std::uint64_t seed);

/// Empirical min over sampled (e_s, e_ss) pairs of the projective distance.
double min_angle_separation(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                            int depth, std::size_t count, std::uint64_t seed);

struct BackwardReport {
  bool holds = false;
  Multicone cone;
  double margin = 0.0;  ///< min of nesting clearance and pairwise gaps
  std::string witness;
};

/// A_i^{-1}(M) inside M with clearance > margin and pairwise disjoint images.
BackwardReport check_backward_non_overlapping(const std::vector<Mat2>& mats, const Multicone& m,
                                              double margin = 1e-12);

/// Tries the user cone, the complement of the forward cone and clustered
/// e_ss samples inflated over a fixed schedule.
BackwardReport find_backward_non_overlapping(const IfsSystem& sys, const SplitReport& split,
                                             const std::optional<Multicone>& user_cone, std::uint64_t seed);

/// alpha1(A_i)^2 <= alpha2(A_i) for all i, in floating point.
bool one_bunched(const std::vector<Mat2>& mats);
/// Same predicate decided in rational arithmetic.
bool one_bunched_exact(const std::vector<ExactAffine>& maps);
/// |a_i| >= |c_i|^2 for lower triangular generators.
bool one_bunched_triangular(const std::vector<Mat2>& mats);

}  // namespace affdim
