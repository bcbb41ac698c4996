#include "affdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "affdim/error.hpp"

namespace affdim {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kBoundSlack = 1e-9;
constexpr double kEmpiricalTolerance = 0.1;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Hypothesis hyp(std::string name, HypothesisStatus s, std::string detail = {}) {
  return {std::move(name), s, std::move(detail)};
}

HypothesisStatus status_of(bool ok) { return ok ? HypothesisStatus::Verified : HypothesisStatus::Failed; }

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

std::vector<double> merged_weights(const MergedLineIfs& m, const BernoulliWeights& w) {
  std::vector<double> out(m.ifs.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) out[m.class_of[i]] += w[i];
  return out;
}

/// Largest depth within the enumeration cap, at most want.
int affordable_depth(std::size_t n_maps, int want) {
  int n = 0;
  double count = 1.0;
  while (n < want && count * static_cast<double>(n_maps) <= static_cast<double>(kDeltaCap)) {
    count *= static_cast<double>(n_maps);
    ++n;
  }
  return n;
}

/// Weight-independent facts about one system, shared by all candidate
/// weight vectors.
class Facts {
 public:
  Facts(const IfsSystem& sys, const AnalyzeOptions& opt, std::optional<double> pressure_upper = {})
      : sys_(sys), opt_(opt) {
    split_ = certify_splitting(sys, opt.forward_cone);
    ssc_ = certify_ssc(sys, opt.polygon, opt.exact);
    if (sys.lower_triangular() && split_.triangular != TriangularSplit::None) {
      triangular_ = true;
      roots_ = triangular_roots(sys);
    }
    if (pressure_upper) {
      pressure_upper_ = *pressure_upper;
    } else if (roots_) {
      pressure_upper_ = roots_->pressure_root;
    } else {
      root_estimate_ = pressure_root(sys.linear_parts(), default_schedule(sys.size()));
      pressure_upper_ = root_estimate_->s_upper;
    }
    if (triangular_) run_hochman();
  }

  const IfsSystem& sys() const { return sys_; }
  const AnalyzeOptions& opt() const { return opt_; }
  const SplitReport& split() const { return split_; }
  const SscSummary& ssc() const { return ssc_; }
  bool triangular() const { return triangular_; }
  double pressure_upper() const { return pressure_upper_; }
  const std::optional<TriangularRoots>& roots() const { return roots_; }
  const std::optional<RootEstimate>& root_estimate() const { return root_estimate_; }
  const std::optional<MergedLineIfs>& merged() const { return merged_; }
  const std::optional<DeltaReport>& hochman() const { return hochman_; }
  const std::string& hochman_ifs() const { return hochman_ifs_; }
  const std::string& hochman_note() const { return hochman_note_; }
  bool split_ok() const { return split_.verdict == SplitVerdict::Certified; }

  const BackwardReport& backward() {
    if (!backward_) {
      try {
        backward_ = find_backward_non_overlapping(sys_, split_, opt_.backward_cone, opt_.seed);
      } catch (const Error& e) {
        BackwardReport r;
        r.witness = e.what();
        backward_ = r;
      }
    }
    return *backward_;
  }
  const std::optional<BackwardReport>& backward_if_computed() const { return backward_; }

  bool bunched() const {
    if (sys_.has_exact()) return one_bunched_exact(*sys_.exact());
    return one_bunched(sys_.linear_parts());
  }

 private:
  void run_hochman() {
    const bool horizontal = split_.triangular == TriangularSplit::ADominant;
    hochman_ifs_ = horizontal ? "horizontal" : "direction";
    const LineIfs line = horizontal ? horizontal_ifs(sys_) : direction_ifs(sys_);
    merged_ = merge_duplicates(line, std::vector<double>(line.size(), 1.0 / static_cast<double>(line.size())));
    if (merged_->ifs.size() < 2) {
      hochman_note_ = "a single distinct map";
      return;
    }
    const int depth = affordable_depth(merged_->ifs.size(), opt_.hochman_depth);
    if (depth < 2) {
      hochman_note_ = "enumeration cap allows depth " + std::to_string(depth);
      return;
    }
    hochman_ = hochman_rate(merged_->ifs, depth, true);
  }

  const IfsSystem& sys_;
  const AnalyzeOptions& opt_;
  SplitReport split_;
  SscSummary ssc_;
  bool triangular_ = false;
  std::optional<TriangularRoots> roots_;
  std::optional<RootEstimate> root_estimate_;
  double pressure_upper_ = 2.0;
  std::optional<MergedLineIfs> merged_;
  std::optional<DeltaReport> hochman_;
  std::string hochman_ifs_;
  std::string hochman_note_;
  std::optional<BackwardReport> backward_;
};

struct MeasureOutcome {
  DimensionReport report;
  ExponentTriple exponents;
  bool exact = false;
  double dim_lyap = 0.0;
};

/// Empirical dim nu_ss from sampled strong stable directions.
std::optional<double> empirical_nu_ss(Facts& fx, const BernoulliWeights& w) {
  try {
    const auto pts = sample_nu_ss(fx.sys(), w, fx.split(), 400, 4000, fx.opt().seed);
    const ProjPoint origin = backward_seed_cone(fx.split()).arcs().front().start();
    std::vector<double> offs;
    offs.reserve(pts.size());
    for (const auto& p : pts) offs.push_back(ccw_offset(origin, p));
    return correlation_dimension_estimate(offs, geometric_radii(1e-1, 1e-3, 6)).slope;
  } catch (const Error&) {
    return std::nullopt;
  }
}

MeasureOutcome measure_report(Facts& fx, const BernoulliWeights& w, bool assume_ssc) {
  MeasureOutcome out;
  DimensionReport& r = out.report;
  const IfsSystem& sys = fx.sys();
  const AnalyzeOptions& opt = fx.opt();

  // (1) exponents and upper bounds
  out.exact = sys.lower_triangular();
  out.exponents = out.exact ? lyapunov_triangular(sys, w)
                            : lyapunov_monte_carlo(sys, w, opt.mc_n, opt.mc_trials, opt.seed);
  const ExponentTriple& ex = out.exponents;
  const double h = ex.entropy, cs = ex.chi_s, css = ex.chi_ss;
  out.dim_lyap = lyapunov_dimension(ex);
  const double dl = out.dim_lyap;
  r.upper = std::min(dl, fx.pressure_upper());
  r.quantities = {{"entropy", h}, {"chi_s", cs}, {"chi_ss", css}, {"dim_lyap", dl},
                  {"pressure_upper", fx.pressure_upper()}};
  if (!out.exact) r.assumptions.push_back("exponents are Monte Carlo estimates");

  auto certify = [&](FiredTheorem t, double v) {
    if (v > fx.pressure_upper() + kBoundSlack) {
      r.hypotheses.push_back(hyp("value below pressure bound", HypothesisStatus::Failed,
                                 fmt(v) + " > " + fmt(fx.pressure_upper())));
      return false;
    }
    r.fired = t;
    r.certified_value = v;
    r.lower = r.upper = v;
    return true;
  };

  // (2) splitting and separation
  const bool split_ok = fx.split_ok();
  r.hypotheses.push_back(hyp("dominated splitting",
                             split_ok ? HypothesisStatus::Verified
                                      : (fx.split().verdict == SplitVerdict::Refuted ? HypothesisStatus::Failed
                                                                                     : HypothesisStatus::Unknown),
                             std::string(to_string(fx.split().method)) + ": " + fx.split().note));
  const bool ssc_ok = assume_ssc || fx.ssc().holds;
  if (assume_ssc)
    r.hypotheses.push_back(hyp("strong separation", HypothesisStatus::AssumedFromTrend,
                               "limit of separated sub-systems"));
  else
    r.hypotheses.push_back(hyp("strong separation",
                               fx.ssc().holds ? HypothesisStatus::Verified
                                              : (fx.ssc().checked ? HypothesisStatus::Failed : HypothesisStatus::Unknown),
                               fx.ssc().holds ? "kappa " + fmt(fx.ssc().kappa) : fx.ssc().witness));
  if (!split_ok || !ssc_ok) {
    r.fired = FiredTheorem::PressureUpperBound;
    r.lower = 0.0;
    return out;
  }

  const auto& hoch = fx.hochman();
  const bool trend = hoch && hoch->verdict == HochmanVerdict::TrendBounded;
  auto hochman_hyp = [&](const std::string& what) {
    if (trend)
      return hyp("Hochman condition (" + what + ")", HypothesisStatus::AssumedFromTrend,
                 "rates bounded to n = " + std::to_string(hoch->rows.size()));
    if (hoch)
      return hyp("Hochman condition (" + what + ")",
                 hoch->verdict == HochmanVerdict::ExactOverlap ? HypothesisStatus::Failed : HypothesisStatus::Unknown,
                 std::string(to_string(hoch->verdict)));
    return hyp("Hochman condition (" + what + ")", HypothesisStatus::Unknown, fx.hochman_note());
  };

  // (3) dominant first coordinate: the transversal measure is self-similar
  if (fx.triangular() && fx.split().triangular == TriangularSplit::ADominant) {
    r.hypotheses.push_back(hyp("|a_i| > |c_i|", HypothesisStatus::Verified));
    r.hypotheses.push_back(hochman_hyp("horizontal IFS"));
    if (trend) {
      r.assumptions.push_back("Hochman condition from the finite-depth trend of Delta_n");
      const auto mw = merged_weights(*fx.merged(), w);
      if (fx.merged()->ifs.size() == sys.size()) {
        if (certify(FiredTheorem::ADominant, dl)) return out;
      } else {
        const double hm = entropy_of(mw);
        const double dim_t = std::min(1.0, hm / cs);
        r.quantities.push_back({"merged_entropy", hm});
        r.quantities.push_back({"dim_transversal", dim_t});
        if (certify(FiredTheorem::LYFormula, ly_dimension_formula(h, cs, css, dim_t))) return out;
      }
    }
  }

  // (4) dominant second coordinate: nu_ss is self-similar
  if (fx.triangular() && fx.split().triangular == TriangularSplit::CDominant) {
    r.hypotheses.push_back(hyp("|a_i| < |c_i|", HypothesisStatus::Verified));
    r.hypotheses.push_back(hochman_hyp("direction IFS"));
    if (trend && css > cs) {
      const auto mw = merged_weights(*fx.merged(), w);
      const double hd = entropy_of(mw);
      const double nu = std::min(1.0, hd / (css - cs));
      r.quantities.push_back({"dim_nu_ss", nu});
      const bool big = nu >= std::min(1.0, dl) - kSlack;
      r.hypotheses.push_back(hyp("dim nu_ss >= min(1, dim_lyap)", status_of(big), fmt(nu) + " vs " + fmt(std::min(1.0, dl))));
      if (big) {
        r.assumptions.push_back("Hochman condition from the finite-depth trend of Delta_n");
        const bool merged = fx.merged()->ifs.size() != sys.size();
        if (merged) r.quantities.push_back({"merged_entropy", hd});
        if (certify(merged ? FiredTheorem::Projection : FiredTheorem::CDominant, dl)) return out;
      }
    }
  }

  // (5) general matrices: separation on the projective line
  const BackwardReport& back = fx.backward();
  const bool bno = back.holds;
  const bool bunched = fx.bunched();
  const Hypothesis h_back = hyp("backward non-overlapping", status_of(bno),
                                bno ? "margin " + fmt(back.margin) : back.witness);
  r.hypotheses.push_back(h_back);
  r.hypotheses.push_back(hyp("1-bunched", status_of(bunched)));
  if (bno && bunched && h <= cs * (1.0 + kSlack)) {
    if (certify(FiredTheorem::HueterLalley, h / cs)) return out;
  }
  if (bno && css > cs) {
    const double nu = h / (css - cs);
    const double lto = lower_bound_iteration(h, cs, css);
    const double sum = nu + 2.0 * h / css;
    // step (4) already recorded and tried dim nu_ss for CDominant systems
    const bool seen = r.quantity("dim_nu_ss").has_value();
    if (!seen) r.quantities.push_back({"dim_nu_ss", nu});
    r.quantities.push_back({"lower_bound_iteration", lto});
    r.quantities.push_back({"dim_nu_ss_plus_2h_over_chi_ss", sum});
    const bool big = nu >= std::min(1.0, dl) - kSlack;
    if (!seen) {
      r.hypotheses.push_back(hyp("dim nu_ss >= min(1, dim_lyap)", status_of(big), fmt(nu) + " vs " + fmt(std::min(1.0, dl))));
      if (big && certify(FiredTheorem::Projection, dl)) return out;
    }
    r.hypotheses.push_back(hyp("h/(chi_ss-chi_s) + 2h/chi_ss > 2", status_of(sum > 2.0), fmt(sum)));
    if (sum > 2.0 && certify(FiredTheorem::App, dl)) return out;
    r.hypotheses.push_back(hyp("dim nu_ss + lower bound > 2", status_of(nu + lto > 2.0), fmt(nu + lto)));
    if (nu + lto > 2.0 && certify(FiredTheorem::FalconerKempton, dl)) return out;
  } else if (!bno && opt.empirical && css > cs) {
    if (const auto est = empirical_nu_ss(fx, w)) {
      const double nu = *est - kEmpiricalTolerance;
      r.quantities.push_back({"dim_nu_ss_empirical", *est});
      const bool big = nu >= std::min(1.0, dl);
      r.hypotheses.push_back(hyp("dim nu_ss >= min(1, dim_lyap) (empirical)",
                                 big ? HypothesisStatus::AssumedFromTrend : HypothesisStatus::Failed, fmt(*est)));
      if (big) {
        r.assumptions.push_back("dim nu_ss from a correlation-dimension estimate");
        if (certify(FiredTheorem::Projection, dl)) return out;
      }
      const bool sum = nu + h / css > 2.0;
      r.hypotheses.push_back(hyp("dim nu_ss + lower bound > 2 (empirical)",
                                 sum ? HypothesisStatus::AssumedFromTrend : HypothesisStatus::Failed,
                                 fmt(*est + h / css)));
      if (sum) {
        r.assumptions.push_back("dim nu_ss from a correlation-dimension estimate");
        if (certify(FiredTheorem::FalconerKempton, dl)) return out;
      }
    }
  }

  // (6) interval
  if (bno) {
    r.fired = FiredTheorem::LowerBound;
    r.lower = lower_bound_iteration(h, cs, css);
  } else {
    r.fired = FiredTheorem::LYFormula;
    r.lower = h / css;
  }
  r.lower = std::min(r.lower, r.upper);
  return out;
}

struct Candidate {
  std::string label;
  BernoulliWeights weights;
};

std::vector<Candidate> attractor_candidates(const Facts& fx, const BernoulliWeights& given) {
  const IfsSystem& sys = fx.sys();
  std::vector<Candidate> c;
  const auto uniform = BernoulliWeights::uniform(sys.size());
  c.push_back({"given", given});
  if (given.p() != uniform.p()) c.push_back({"uniform", uniform});
  if (fx.roots()) {
    const auto& rt = *fx.roots();
    const bool a_dom = rt.kind == TriangularSplit::ADominant;
    std::vector<double> m1, m2;
    for (const auto& f : sys.maps()) {
      const double u = std::abs(a_dom ? f.linear.a11 : f.linear.a22);
      const double v = std::abs(a_dom ? f.linear.a22 : f.linear.a11);
      m1.push_back(std::pow(u, rt.s1));
      m2.push_back(u * std::pow(v, rt.s2 - 1.0));
    }
    c.push_back({"root-s1", BernoulliWeights::from_masses(m1)});
    c.push_back({"root-s2", BernoulliWeights::from_masses(m2)});
  }
  return c;
}

double report_lower(const DimensionReport& r) { return r.certified_value.value_or(r.lower); }

AttractorReport attractor_report(Facts& fx, const BernoulliWeights& given, const DimensionReport& given_report) {
  AttractorReport ar;
  ar.upper = fx.pressure_upper();
  ar.lower = report_lower(given_report);
  ar.fired = given_report.fired;
  ar.weights_label = "given";
  bool any_certified = given_report.certified();
  for (const auto& cand : attractor_candidates(fx, given)) {
    if (cand.label == "given") continue;
    const auto m = measure_report(fx, cand.weights, false);
    const double lo = report_lower(m.report);
    if (lo > ar.lower || (m.report.certified() && !any_certified && lo >= ar.lower)) {
      ar.lower = lo;
      ar.fired = m.report.fired;
      ar.weights_label = cand.label;
      any_certified = any_certified || m.report.certified();
    }
  }
  if (fx.roots())
    ar.hypotheses.push_back(hyp("1-bunched |a_i| >= c_i^2", status_of(one_bunched_triangular(fx.sys().linear_parts()))));
  ar.hypotheses.push_back(hyp("pressure root is an upper bound", HypothesisStatus::Verified,
                              fx.roots() ? "closed form" : "finite-n root"));
  if (any_certified && ar.lower >= ar.upper - kBoundSlack) {
    ar.certified_value = ar.upper;
    ar.lower = ar.upper;
  }
  if (!fx.roots() && !ar.certified_value)
    ar.hypotheses.push_back(hyp("exact pressure root", HypothesisStatus::Unknown, "finite-n root is biased upwards"));
  ar.lower = std::min(ar.lower, ar.upper);
  return ar;
}

/// Sub-systems that drop the words over an excluded alphabet, each with
/// uniform weights; their dimensions bound the attractor from below.
void add_subsystem_rows(Facts& fx, AttractorReport& ar, const SubsystemSpec& spec) {
  const IfsSystem& sys = fx.sys();
  std::vector<int> depths = spec.depths;
  std::sort(depths.begin(), depths.end());
  for (int d : depths) {
    const IfsSystem sub = subsystem_excluding(sys, d, spec.exclude);
    AnalyzeOptions so = fx.opt();
    so.weights.reset();
    so.forward_cone.reset();
    so.backward_cone.reset();
    so.subsystem.reset();
    so.exact = false;
    Facts sf(sub, so, fx.pressure_upper());
    const auto m = measure_report(sf, BernoulliWeights::uniform(sub.size()), false);
    ar.subsystem_rows.push_back({d, sub.size(), sf.ssc().holds, m.report});
  }

  // Limit value: the full system's formula with separation assumed.
  const auto lim = measure_report(fx, BernoulliWeights::uniform(sys.size()), true);
  if (!lim.report.certified()) return;
  ar.subsystem_limit = *lim.report.certified_value;
  const double limit = *ar.subsystem_limit;

  bool ok = !ar.subsystem_rows.empty();
  double prev = -1.0, prev_gap = 1e300;
  for (const auto& row : ar.subsystem_rows) {
    if (!row.report.certified() || !row.ssc_holds) ok = false;
    const double v = report_lower(row.report);
    const double gap = limit - v;
    if (v <= prev || gap < -kBoundSlack || gap >= prev_gap) ok = false;
    prev = v;
    prev_gap = gap;
  }
  ar.hypotheses.push_back(hyp("sub-system bounds increase towards the limit", ok ? HypothesisStatus::AssumedFromTrend
                                                                                 : HypothesisStatus::Failed,
                              "limit " + fmt(limit)));
  const double best_row = ar.subsystem_rows.empty() ? 0.0 : report_lower(ar.subsystem_rows.back().report);
  if (best_row > ar.lower) {
    ar.lower = std::min(best_row, ar.upper);
    ar.weights_label = "sub-system depth " + std::to_string(ar.subsystem_rows.back().depth);
    ar.fired = ar.subsystem_rows.back().report.fired;
  }
  if (ok && !ar.certified_value && std::abs(limit - ar.upper) <= kBoundSlack) {
    ar.certified_value = ar.upper;
    ar.lower = ar.upper;
    ar.fired = lim.report.fired;
    ar.weights_label = "uniform sub-system limit";
  }
}

}  // namespace

std::string_view to_string(FiredTheorem t) {
  switch (t) {
    case FiredTheorem::LYFormula: return "T2.6-LY-formula";
    case FiredTheorem::Projection: return "T2.8-projection";
    case FiredTheorem::FalconerKempton: return "T2.9-Falconer-Kempton";
    case FiredTheorem::HueterLalley: return "T4.1-HueterLalley";
    case FiredTheorem::ADominant: return "T4.2-ADominant";
    case FiredTheorem::CDominant: return "T4.2-CDominant";
    case FiredTheorem::App: return "T4.5-app";
    case FiredTheorem::PressureUpperBound: return "PressureUpperBound";
    case FiredTheorem::LowerBound: return "Lemma4.9-LowerBound";
  }
  return "?";
}

std::string_view to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::Verified: return "Verified";
    case HypothesisStatus::AssumedFromTrend: return "AssumedFromTrend";
    case HypothesisStatus::Failed: return "Failed";
    case HypothesisStatus::Unknown: return "Unknown";
  }
  return "?";
}

std::optional<double> DimensionReport::quantity(const std::string& name) const {
  for (const auto& q : quantities)
    if (q.name == name) return q.value;
  return std::nullopt;
}

double ly_dimension_formula(double h, double chi_s, double chi_ss, double dim_t) {
  if (!(chi_s > 0.0) || chi_s > chi_ss) throw Error(ErrorCode::BadExponents, "need 0 < chi_s <= chi_ss");
  if (!(dim_t >= 0.0 && dim_t <= 1.0)) throw Error(ErrorCode::BadExponents, "dim_T must lie in [0, 1]");
  if (chi_s == chi_ss) return h / chi_s;
  return h / chi_ss + (1.0 - chi_s / chi_ss) * dim_t;
}

double lower_bound_iteration(double h, double chi_s, double chi_ss) {
  if (!(chi_s < chi_ss)) return h / chi_s;
  const double base = h / chi_ss;
  const double ratio = 1.0 - chi_s / chi_ss;
  const double cap = h / (chi_ss - chi_s);
  double x = base;
  // the remaining distance to the limit is at most step * ratio / (1 - ratio)
  const double tail = ratio / (1.0 - ratio);
  for (int k = 0; k < 1'000'000; ++k) {
    const double next = base + ratio * std::min(cap, x);
    if (std::abs(next - x) * tail < 1e-15 * std::max(1.0, next)) return next;
    x = next;
  }
  return x;
}

SscSummary certify_ssc(const IfsSystem& sys, const std::optional<Polygon>& polygon, bool exact) {
  SscSummary s;
  if (!polygon) {
    s.witness = "no polygon given";
    return s;
  }
  s.checked = true;
  const bool can_exact = exact && sys.has_exact() && polygon->exact.has_value();
  const SscReport plain = check_ssc(sys, *polygon, 1e-9, can_exact);
  s.exact = plain.exact;
  if (plain.holds) {
    s.holds = true;
    s.kappa = plain.kappa;
    s.margin = plain.margin;
    return s;
  }
  s.witness = plain.witness;
  const RefinedSscReport ref = check_ssc_refined(sys, *polygon);
  if (ref.forward_invariant && ref.holds) {
    s.holds = true;
    s.refined = true;
    s.exact = false;
    s.kappa = ref.kappa_lower;
    s.margin = 0.0;
    s.witness.clear();
  } else if (!ref.witness.empty()) {
    s.witness = ref.witness;
  }
  return s;
}

bool HueterLalleyCheck::all_verified() const {
  return splitting.status == HypothesisStatus::Verified && backward.status == HypothesisStatus::Verified &&
         bunched.status == HypothesisStatus::Verified && ssc.status == HypothesisStatus::Verified;
}

HueterLalleyCheck hueter_lalley_check(const IfsSystem& sys, const std::optional<Polygon>& polygon,
                                      const std::optional<Multicone>& forward_cone,
                                      const std::optional<Multicone>& backward_cone, std::uint64_t seed) {
  HueterLalleyCheck c;
  const SplitReport split = certify_splitting(sys, forward_cone);
  const bool split_ok = split.verdict == SplitVerdict::Certified;
  c.splitting = hyp("dominated splitting",
                    split_ok ? HypothesisStatus::Verified
                             : (split.verdict == SplitVerdict::Refuted ? HypothesisStatus::Failed
                                                                       : HypothesisStatus::Unknown),
                    split.note);
  if (split_ok || backward_cone) {
    c.backward_report = find_backward_non_overlapping(sys, split, backward_cone, seed);
    c.backward = hyp("backward non-overlapping", status_of(c.backward_report->holds), c.backward_report->witness);
  } else {
    c.backward = hyp("backward non-overlapping", HypothesisStatus::Unknown, "no backward cone to test");
  }
  const bool bunched = sys.has_exact() ? one_bunched_exact(*sys.exact()) : one_bunched(sys.linear_parts());
  c.bunched = hyp("1-bunched", status_of(bunched));
  const SscSummary s = certify_ssc(sys, polygon);
  c.ssc = hyp("strong separation",
              s.holds ? HypothesisStatus::Verified : (s.checked ? HypothesisStatus::Failed : HypothesisStatus::Unknown),
              s.witness);
  return c;
}

AnalysisResult analyze(const IfsSystem& sys, const AnalyzeOptions& options) {
  const BernoulliWeights weights = options.weights.value_or(BernoulliWeights::uniform(sys.size()));
  if (weights.size() != sys.size()) throw Error(ErrorCode::InvalidArgument, "weights do not match the system");
  Facts fx(sys, options);
  AnalysisResult res;
  res.label = sys.label();
  const auto m = measure_report(fx, weights, false);
  res.exponents = m.exponents;
  res.exponents_exact = m.exact;
  res.dim_lyap = m.dim_lyap;
  res.pressure_upper = fx.pressure_upper();
  res.roots = fx.roots();
  res.root_estimate = fx.root_estimate();
  res.split = fx.split();
  res.ssc = fx.ssc();
  res.backward = fx.backward_if_computed();
  res.hochman_ifs = fx.hochman_ifs();
  res.hochman = fx.hochman();
  res.measure = m.report;
  if (options.attractor) {
    res.attractor = attractor_report(fx, weights, m.report);
    if (options.subsystem && !options.subsystem->depths.empty()) add_subsystem_rows(fx, *res.attractor, *options.subsystem);
  }
  return res;
}

}  // namespace affdim
