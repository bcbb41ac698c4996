#pragma once

// Separation of depth-n compositions of a self-similar IFS on the line and
// the finite-depth trend of -(1/n) log Delta_n.

#include <optional>
#include <string>
#include <vector>

#include "affdim/ifs.hpp"
#include "affdim/rational.hpp"

namespace affdim {

struct LineMap {
  double beta = 0.0;
  double gamma = 0.0;
};

struct ExactLineMap {
  Rational beta;
  Rational gamma;
  friend bool operator==(const ExactLineMap&, const ExactLineMap&) = default;
};

/// x -> beta_i x + gamma_i with 0 < |beta_i| < 1.
class LineIfs {
 public:
  LineIfs() = default;
  explicit LineIfs(std::vector<LineMap> maps);
  explicit LineIfs(std::vector<ExactLineMap> exact);

  std::size_t size() const { return maps_.size(); }
  const std::vector<LineMap>& maps() const { return maps_; }
  const std::optional<std::vector<ExactLineMap>>& exact() const { return exact_; }
  bool has_exact() const { return exact_.has_value(); }
  double min_abs_beta() const;

 private:
  std::vector<LineMap> maps_;
  std::optional<std::vector<ExactLineMap>> exact_;
};

/// Parses "beta,gamma;beta,gamma;..." with exact rationals.
LineIfs parse_line_ifs(const std::string& text);

/// {a_i x + t_i}: the x-coordinate IFS of a lower triangular system.
LineIfs horizontal_ifs(const IfsSystem& sys);
/// {(a_i/c_i) x - b_i/c_i}: slopes of strong stable directions when |a_i| < |c_i|.
LineIfs direction_ifs(const IfsSystem& sys);

struct DeltaValue {
  bool infinite = false;  ///< every ratio group is a singleton
  double value = 0.0;     ///< +inf when infinite
  std::optional<Rational> exact;

  bool zero() const { return !infinite && value == 0.0; }
  std::string to_string() const;
};

inline constexpr std::size_t kDeltaCap = 2'000'000;

/// min distance between translations of distinct words of length n sharing
/// a contraction ratio. Exact when the IFS is rational and exact is set.
DeltaValue delta_n(const LineIfs& ifs, int n, bool exact = true, std::size_t cap = kDeltaCap);

enum class HochmanVerdict { TrendBounded, ExactOverlap, Inconclusive };
std::string_view to_string(HochmanVerdict v);

struct DeltaRow {
  int n = 0;
  DeltaValue delta;
  double rate = 0.0;  ///< -(1/n) log Delta_n; -inf for infinite, +inf for zero
};

struct DeltaReport {
  std::vector<DeltaRow> rows;
  HochmanVerdict verdict = HochmanVerdict::Inconclusive;
  double rate_bound = 0.0;  ///< 1.5 * (-log min |beta|)
  bool exact = false;
};

/// Rows for n = 1..n_max. TrendBounded when no Delta_n vanishes and either
/// every rate stays below rate_bound or rate(n_max) <= 1.5 rate(ceil(n_max/2)).
/// Float inputs never get a TrendBounded verdict.
DeltaReport hochman_rate(const LineIfs& ifs, int n_max, bool exact = true, std::size_t cap = kDeltaCap);

struct MergedLineIfs {
  LineIfs ifs;
  std::vector<double> weights;
  std::vector<std::size_t> class_of;  ///< original symbol -> merged symbol
};

/// Identifies equal maps (exactly when rational) and adds their weights.
MergedLineIfs merge_duplicates(const LineIfs& ifs, const std::vector<double>& weights);

}  // namespace affdim
