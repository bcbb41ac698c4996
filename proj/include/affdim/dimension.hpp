#pragma once

// The theorem engine: dimension formulas, hypothesis checks and the
// decision procedure combining them into certified values or intervals.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affdim/config.hpp"
#include "affdim/ergodic.hpp"
#include "affdim/estimators.hpp"
#include "affdim/hochman.hpp"
#include "affdim/ifs.hpp"
#include "affdim/pressure.hpp"
#include "affdim/splitting.hpp"

namespace affdim {

enum class FiredTheorem {
  LYFormula,
  Projection,
  FalconerKempton,
  HueterLalley,
  ADominant,
  CDominant,
  App,
  PressureUpperBound,
  LowerBound,
};
std::string_view to_string(FiredTheorem t);

enum class HypothesisStatus { Verified, AssumedFromTrend, Failed, Unknown };
std::string_view to_string(HypothesisStatus s);

struct Hypothesis {
  std::string name;
  HypothesisStatus status = HypothesisStatus::Unknown;
  std::string detail;
};

struct Quantity {
  std::string name;
  double value = 0.0;
};

struct DimensionReport {
  std::optional<double> certified_value;
  double lower = 0.0;
  double upper = 0.0;
  FiredTheorem fired = FiredTheorem::PressureUpperBound;
  std::vector<Hypothesis> hypotheses;
  std::vector<std::string> assumptions;
  std::vector<Quantity> quantities;

  bool certified() const { return certified_value.has_value(); }
  std::optional<double> quantity(const std::string& name) const;
};

/// h/chi_ss + (1 - chi_s/chi_ss) dim_T. Throws BadExponents unless
/// 0 < chi_s <= chi_ss and dim_T in [0, 1].
double ly_dimension_formula(double h, double chi_s, double chi_ss, double dim_t);

/// Limit of x_{k+1} = h/chi_ss + (1 - chi_s/chi_ss) min{h/(chi_ss - chi_s), x_k}
/// from x_0 = h/chi_ss; h/chi_s when chi_s >= chi_ss.
double lower_bound_iteration(double h, double chi_s, double chi_ss);

struct SscSummary {
  bool checked = false;  ///< a polygon was available
  bool holds = false;
  bool refined = false;  ///< decided by cylinder refinement
  bool exact = false;
  double kappa = 0.0;
  double margin = 0.0;
  std::string witness;
};

/// check_ssc, then check_ssc_refined when the polygon is forward invariant.
SscSummary certify_ssc(const IfsSystem& sys, const std::optional<Polygon>& polygon, bool exact = false);

struct HueterLalleyCheck {
  Hypothesis splitting;
  Hypothesis backward;
  Hypothesis bunched;
  Hypothesis ssc;
  std::optional<BackwardReport> backward_report;

  bool all_verified() const;
  std::vector<Hypothesis> list() const { return {splitting, backward, bunched, ssc}; }
};

HueterLalleyCheck hueter_lalley_check(const IfsSystem& sys, const std::optional<Polygon>& polygon,
                                      const std::optional<Multicone>& forward_cone = {},
                                      const std::optional<Multicone>& backward_cone = {}, std::uint64_t seed = 1);

struct AnalyzeOptions {
  std::optional<BernoulliWeights> weights;  ///< uniform when absent
  std::optional<Polygon> polygon;
  std::optional<Multicone> forward_cone;
  std::optional<Multicone> backward_cone;
  std::optional<SubsystemSpec> subsystem;
  int hochman_depth = 6;
  int mc_n = 1000;
  int mc_trials = 1000;
  std::uint64_t seed = 1;
  bool exact = false;      ///< rational SSC predicates
  bool attractor = true;   ///< also report the attractor dimension
  bool empirical = true;   ///< empirical dim nu_ss when backward non-overlapping fails
};

struct SubsystemRow {
  int depth = 0;
  std::size_t maps = 0;
  bool ssc_holds = false;
  DimensionReport report;
};

struct AttractorReport {
  std::optional<double> certified_value;
  double lower = 0.0;
  double upper = 0.0;
  FiredTheorem fired = FiredTheorem::PressureUpperBound;
  std::string weights_label;  ///< candidate attaining the lower bound
  std::vector<Hypothesis> hypotheses;
  std::vector<SubsystemRow> subsystem_rows;
  std::optional<double> subsystem_limit;
};

struct AnalysisResult {
  std::string label;
  ExponentTriple exponents;
  bool exponents_exact = false;
  double dim_lyap = 0.0;
  double pressure_upper = 0.0;
  std::optional<TriangularRoots> roots;
  std::optional<RootEstimate> root_estimate;
  SplitReport split;
  SscSummary ssc;
  std::optional<BackwardReport> backward;
  std::string hochman_ifs;  ///< "horizontal" or "direction" when run
  std::optional<DeltaReport> hochman;
  DimensionReport measure;
  std::optional<AttractorReport> attractor;

  bool certified() const { return measure.certified() || (attractor && attractor->certified_value); }
  /// 0 when something is certified, 2 for intervals only.
  int exit_code() const { return certified() ? 0 : 2; }
};

AnalysisResult analyze(const IfsSystem& sys, const AnalyzeOptions& options = {});

}  // namespace affdim
