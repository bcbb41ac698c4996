#include "affdim/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"
#include "affdim/rng.hpp"

namespace affdim {

namespace {

/// Angular gap between disjoint arcs; -1 when they overlap.
double arc_gap(const ProjArc& a, const ProjArc& b) {
  if (a.overlaps(b)) return -1.0;
  return std::min(ccw_offset(a.end(), b.start()), ccw_offset(b.end(), a.start()));
}

/// Direction of the most expanded vector of p, i.e. the top eigenvector of p p^T.
ProjPoint top_left_direction(const Mat2& p) {
  const double s11 = p.a11 * p.a11 + p.a12 * p.a12;
  const double s22 = p.a21 * p.a21 + p.a22 * p.a22;
  const double s12 = p.a11 * p.a21 + p.a12 * p.a22;
  return ProjPoint(0.5 * std::atan2(2.0 * s12, s11 - s22));
}

Mat2 renormalized(const Mat2& m) {
  const double s = m.max_abs();
  return s > 0.0 ? (1.0 / s) * m : m;
}

const std::vector<double> kInflation = {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.3};

/// Arcs covering clusters of sorted angles, cut at the k largest circular gaps.
std::optional<std::vector<ProjArc>> cluster_arcs(std::vector<double> angles, std::size_t k, double eps) {
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  const std::size_t n = angles.size();
  if (n == 0 || k == 0 || k > n) return std::nullopt;
  std::vector<std::pair<double, std::size_t>> gaps;  // gap after angle i
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? angles[i + 1] : angles[0] + kPi;
    gaps.push_back({next - angles[i], i});
  }
  std::stable_sort(gaps.begin(), gaps.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::size_t> cuts;
  for (std::size_t j = 0; j < k; ++j) cuts.push_back(gaps[j].second);
  std::sort(cuts.begin(), cuts.end());
  std::vector<ProjArc> arcs;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t first = (cuts[j] + 1) % n;
    const std::size_t last = cuts[(j + 1) % k];
    const double start = angles[first];
    double length = angles[last] - start;
    if (length < 0.0) length += kPi;
    const double half = 0.5 * length + eps;
    if (half >= 0.5 * kPi) return std::nullopt;
    arcs.push_back(ProjArc::centered(ProjPoint(start + 0.5 * length), half));
  }
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j)
      if (arc_gap(arcs[i], arcs[j]) <= 0.0) return std::nullopt;
  double total = 0.0;
  for (const auto& a : arcs) total += a.length();
  if (total >= kPi) return std::nullopt;
  return arcs;
}

template <class NextMatrix>
ProjPoint iterate_direction(NextMatrix&& next, const ProjArc& cone, double tol, int max_iter) {
  // The cone is mapped into itself, so the images of its endpoints bracket the
  // limit. A single seed can sit on an eigendirection of one generator and stall.
  const Vec2 lo = cone.start().unit(), hi = cone.end().unit(), mid = cone.midpoint().unit();
  Mat2 acc = Mat2::identity();
  for (int k = 0; k < max_iter; ++k) {
    const Mat2* m = next();
    if (m == nullptr) break;
    acc = renormalized(acc * *m);
    if (proj_metric(ProjPoint::from_vector(acc * lo), ProjPoint::from_vector(acc * hi)) < tol)
      return ProjPoint::from_vector(acc * mid);
  }
  throw Error(ErrorCode::PrefixTooShort, "direction iteration did not settle within tolerance");
}

}  // namespace

Multicone::Multicone(std::vector<ProjArc> arcs) : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw Error(ErrorCode::InvalidArgument, "multicone needs at least one arc");
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    for (std::size_t j = i + 1; j < arcs_.size(); ++j)
      if (arcs_[i].overlaps(arcs_[j])) throw Error(ErrorCode::InvalidArgument, "multicone arcs overlap");
  if (total_length() >= kPi) throw Error(ErrorCode::InvalidArgument, "multicone covers the projective line");
}

double Multicone::total_length() const {
  double t = 0.0;
  for (const auto& a : arcs_) t += a.length();
  return t;
}

bool Multicone::contains(ProjPoint p, double slack) const {
  return std::any_of(arcs_.begin(), arcs_.end(), [&](const ProjArc& a) { return a.contains(p, slack); });
}

double Multicone::clearance(const ProjArc& inner) const {
  double best = -kPi;
  for (const auto& a : arcs_) best = std::max(best, a.clearance(inner));
  return best;
}

Multicone Multicone::complement() const {
  if (arcs_.size() != 1) throw Error(ErrorCode::InvalidArgument, "complement of a multi-arc cone");
  return Multicone({ProjArc(arcs_[0].end(), arcs_[0].start())});
}

std::string_view to_string(TriangularSplit t) {
  switch (t) {
    case TriangularSplit::ADominant: return "ADominant";
    case TriangularSplit::CDominant: return "CDominant";
    case TriangularSplit::None: return "None";
  }
  return "None";
}

std::string_view to_string(SplitVerdict v) {
  switch (v) {
    case SplitVerdict::Certified: return "Certified";
    case SplitVerdict::Refuted: return "Refuted";
    case SplitVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(SplitMethod m) {
  switch (m) {
    case SplitMethod::Triangular: return "Triangular";
    case SplitMethod::Positivity: return "Positivity";
    case SplitMethod::MulticoneCheck: return "MulticoneCheck";
  }
  return "MulticoneCheck";
}

TriangularSplit check_triangular_split(const IfsSystem& sys) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "some linear part has a12 != 0");
  bool a_wins = true, c_wins = true;
  for (const auto& f : sys.maps()) {
    const double a = std::abs(f.linear.a11), c = std::abs(f.linear.a22);
    if (!(a > c)) a_wins = false;
    if (!(a < c)) c_wins = false;
  }
  if (sys.has_exact()) {
    a_wins = c_wins = true;
    for (const auto& e : *sys.exact()) {
      const Rational a = abs(e.a[0]), c = abs(e.a[3]);
      if (!(a > c)) a_wins = false;
      if (!(a < c)) c_wins = false;
    }
  }
  if (a_wins) return TriangularSplit::ADominant;
  if (c_wins) return TriangularSplit::CDominant;
  return TriangularSplit::None;
}

SplitReport check_multicone_invariance(const std::vector<Mat2>& mats, const Multicone& m, double margin) {
  SplitReport rep;
  rep.method = SplitMethod::MulticoneCheck;
  rep.multicone = m;
  rep.margin = kPi;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (const auto& arc : m.arcs()) {
      const double c = m.clearance(arc_image(mats[i], arc));
      if (c < rep.margin) {
        rep.margin = c;
        if (!(c >= margin && c > 0.0)) rep.note = "image of an arc under A_" + std::to_string(i + 1) + " leaves the multicone";
      }
    }
  }
  rep.verdict = (rep.margin >= margin && rep.margin > 0.0) ? SplitVerdict::Certified : SplitVerdict::Refuted;
  return rep;
}

Multicone triangular_forward_cone(const std::vector<Mat2>& mats, TriangularSplit kind) {
  if (kind == TriangularSplit::CDominant) {
    // slopes x/y of the cone |x/y| <= eps are mapped to |x/y| < eps.
    double eps = 1.0;
    for (const auto& m : mats) {
      const double b = std::abs(m.a21);
      if (b > 0.0) eps = std::min(eps, 0.5 * (std::abs(m.a22) - std::abs(m.a11)) / b);
    }
    return Multicone({ProjArc::centered(ProjPoint(0.5 * kPi), std::atan(eps))});
  }
  if (kind == TriangularSplit::ADominant) {
    double v = 0.0;
    for (const auto& m : mats) v = std::max(v, std::abs(m.a21) / (std::abs(m.a11) - std::abs(m.a22)));
    return Multicone({ProjArc::centered(ProjPoint(0.0), std::atan(2.0 * v + 1.0))});
  }
  throw Error(ErrorCode::NoDomination, "triangular criterion does not hold");
}

std::optional<std::string> equal_modulus_obstruction(const std::vector<Mat2>& mats, int depth) {
  std::vector<std::pair<Mat2, std::string>> level;
  for (std::size_t i = 0; i < mats.size(); ++i) level.push_back({mats[i], std::to_string(i + 1)});
  for (int d = 1; d <= depth; ++d) {
    for (const auto& [m, name] : level) {
      const double tr = m.trace(), det = m.det();
      const double scale = std::max(tr * tr, std::abs(det));
      const double disc = tr * tr - 4.0 * det;
      if (disc < -1e-12 * scale) return "product " + name + " has complex eigenvalues";
      if (det < 0.0 && std::abs(tr) <= 1e-15 * std::sqrt(scale))
        return "product " + name + " has eigenvalues of equal modulus";
    }
    if (d == depth) break;
    std::vector<std::pair<Mat2, std::string>> next;
    for (const auto& [m, name] : level)
      for (std::size_t i = 0; i < mats.size(); ++i) next.push_back({m * mats[i], name + "," + std::to_string(i + 1)});
    level = std::move(next);
  }
  return std::nullopt;
}

std::optional<Multicone> propose_multicone(const std::vector<Mat2>& mats, std::uint64_t seed) {
  constexpr std::size_t kSamples = 512;
  constexpr int kLength = 60;
  std::vector<double> angles(kSamples);
  for (std::size_t k = 0; k < kSamples; ++k) {
    CounterStream rng(seed, k);
    Mat2 p = Mat2::identity();
    for (int j = 0; j < kLength; ++j) p = renormalized(p * mats[rng.next_u64() % mats.size()]);
    angles[k] = top_left_direction(p).theta();
  }
  for (double eps : kInflation) {
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto arcs = cluster_arcs(angles, k, eps);
      if (!arcs) continue;
      const Multicone m(*arcs);
      if (check_multicone_invariance(mats, m).verdict == SplitVerdict::Certified) return m;
    }
  }
  return std::nullopt;
}

SplitReport certify_splitting(const IfsSystem& sys, const std::optional<Multicone>& user_cone) {
  const auto mats = sys.linear_parts();
  if (sys.lower_triangular()) {
    const TriangularSplit kind = check_triangular_split(sys);
    if (kind != TriangularSplit::None) {
      SplitReport rep = check_multicone_invariance(mats, triangular_forward_cone(mats, kind));
      rep.method = SplitMethod::Triangular;
      rep.triangular = kind;
      // The criterion is exact; the cone only serves the direction iterations.
      rep.verdict = SplitVerdict::Certified;
      rep.note = std::string(to_string(kind));
      return rep;
    }
  }

  auto sign_pattern = [&](int s12) {
    // s12 = +1: all entries of one sign; -1: diagonal and off-diagonal opposite.
    return std::all_of(mats.begin(), mats.end(), [&](const Mat2& m) {
      const double s = m.a11 > 0.0 ? 1.0 : -1.0;
      return s * m.a11 > 0.0 && s * m.a22 > 0.0 && s12 * s * m.a12 > 0.0 && s12 * s * m.a21 > 0.0;
    });
  };
  for (int pattern : {1, -1}) {
    if (!sign_pattern(pattern)) continue;
    const ProjArc quadrant = pattern == 1 ? ProjArc(ProjPoint(0.0), ProjPoint(0.5 * kPi))
                                          : ProjArc(ProjPoint(0.5 * kPi), ProjPoint(0.0));
    SplitReport rep = check_multicone_invariance(mats, Multicone({quadrant}));
    if (rep.verdict == SplitVerdict::Certified) {
      rep.method = SplitMethod::Positivity;
      rep.note = pattern == 1 ? "positive entries" : "second-quadrant sign pattern";
      return rep;
    }
  }

  if (auto why = equal_modulus_obstruction(mats)) {
    SplitReport rep;
    rep.verdict = SplitVerdict::Refuted;
    rep.note = *why;
    return rep;
  }

  if (user_cone) {
    SplitReport rep = check_multicone_invariance(mats, *user_cone);
    if (rep.verdict == SplitVerdict::Certified) {
      rep.note = "user multicone";
      return rep;
    }
  }
  if (auto m = propose_multicone(mats)) {
    SplitReport rep = check_multicone_invariance(mats, *m);
    rep.note = "proposed multicone";
    return rep;
  }
  SplitReport rep;
  rep.verdict = SplitVerdict::Unknown;
  rep.note = "no invariant multicone found";
  return rep;
}

ProjPoint strong_stable_direction(const IfsSystem& sys, const std::function<std::size_t()>& next_symbol,
                                  const DirectionOptions& opt, const Multicone& backward_cone) {
  std::vector<Mat2> inv;
  for (const auto& f : sys.maps()) inv.push_back(f.linear.inverse());
  Mat2 current;
  return iterate_direction(
      [&]() -> const Mat2* {
        const std::size_t s = next_symbol();
        if (s == static_cast<std::size_t>(-1)) return nullptr;
        if (s >= inv.size()) throw Error(ErrorCode::BadSymbol, "symbol out of range");
        current = inv[s];
        return &current;
      },
      backward_cone.arcs().front(), opt.tol, opt.max_iter);
}

ProjPoint stable_direction(const IfsSystem& sys, const std::function<std::size_t()>& next_symbol,
                           const DirectionOptions& opt, const Multicone& forward_cone) {
  Mat2 current;
  return iterate_direction(
      [&]() -> const Mat2* {
        const std::size_t s = next_symbol();
        if (s == static_cast<std::size_t>(-1)) return nullptr;
        if (s >= sys.size()) throw Error(ErrorCode::BadSymbol, "symbol out of range");
        current = sys[s].linear;
        return &current;
      },
      forward_cone.arcs().front(), opt.tol, opt.max_iter);
}

namespace {

std::function<std::size_t()> word_source(const Word& w) {
  return [&w, k = std::size_t{0}]() mutable { return k < w.size() ? w[k++] : static_cast<std::size_t>(-1); };
}

}  // namespace

ProjPoint strong_stable_direction(const IfsSystem& sys, const Word& prefix, double tol,
                                  const Multicone& backward_cone) {
  validate_word(sys, prefix);
  return strong_stable_direction(sys, word_source(prefix), {tol, 10000}, backward_cone);
}

ProjPoint stable_direction(const IfsSystem& sys, const Word& suffix, double tol, const Multicone& forward_cone) {
  validate_word(sys, suffix);
  return stable_direction(sys, word_source(suffix), {tol, 10000}, forward_cone);
}

namespace {

/// Partial sums of the slope series until the tail bound drops below tol.
template <class NextSymbol>
ProjPoint slope_series(const IfsSystem& sys, NextSymbol&& next, double tol, int max_terms) {
  double ratio = 0.0, bmax = 0.0;
  for (const auto& f : sys.maps()) {
    ratio = std::max(ratio, std::abs(f.linear.a11 / f.linear.a22));
    bmax = std::max(bmax, std::abs(f.linear.a21 / f.linear.a22));
  }
  if (!(ratio < 1.0)) throw Error(ErrorCode::NoDomination, "slope series needs |a_i| < |c_i|");
  double sum = 0.0;
  double lead = 1.0;  // a_{i_{n-1}}...a_{i_0} / (c_{i_{n-1}}...c_{i_0})
  double bound = bmax / (1.0 - ratio);
  for (int n = 0; n < max_terms; ++n) {
    if (bound < tol) return ProjPoint::from_slope(sum);
    const std::size_t s = next();
    if (s == static_cast<std::size_t>(-1)) break;
    if (s >= sys.size()) throw Error(ErrorCode::BadSymbol, "symbol out of range");
    const Mat2& m = sys[s].linear;
    sum -= m.a21 / m.a22 * lead;
    lead *= m.a11 / m.a22;
    bound *= ratio;
  }
  if (bound < tol) return ProjPoint::from_slope(sum);
  throw Error(ErrorCode::PrefixTooShort, "slope series tail above tolerance");
}

}  // namespace

ProjPoint strong_stable_series(const IfsSystem& sys, const Word& prefix, double tol) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "slope series needs lower triangular maps");
  validate_word(sys, prefix);
  return slope_series(sys, word_source(prefix), tol, static_cast<int>(prefix.size()) + 1);
}

Multicone backward_seed_cone(const SplitReport& split) {
  if (split.verdict != SplitVerdict::Certified) throw Error(ErrorCode::NotCertified, "splitting not certified");
  const auto& arcs = split.multicone.arcs();
  if (arcs.size() == 1) return split.multicone.complement();
  // Any gap between consecutive forward arcs lies in the backward cone.
  std::vector<ProjArc> sorted = arcs;
  std::sort(sorted.begin(), sorted.end(), [](const ProjArc& a, const ProjArc& b) { return a.start().theta() < b.start().theta(); });
  return Multicone({ProjArc(sorted[0].end(), sorted[1].start())});
}

namespace {

constexpr double kSampleTol = 1e-12;

}  // namespace

std::vector<ProjPoint> sample_nu_ss(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                                    int depth, std::size_t count, std::uint64_t seed) {
  if (split.verdict != SplitVerdict::Certified) throw Error(ErrorCode::NotCertified, "splitting not certified");
  if (weights.size() != sys.size()) throw Error(ErrorCode::InvalidArgument, "weights and maps differ in length");
  const SymbolSampler sampler(weights.p());
  std::vector<ProjPoint> out(count);
  const auto n = static_cast<std::int64_t>(count);
  if (split.triangular == TriangularSplit::ADominant) {
    std::fill(out.begin(), out.end(), ProjPoint(0.5 * kPi));
    return out;
  }
  const Multicone back = backward_seed_cone(split);
  const bool series = split.triangular == TriangularSplit::CDominant;
  ErrorSlot failure;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    failure.run([&] {
      CounterStream rng(seed, static_cast<std::uint64_t>(k));
      int drawn = 0;
      auto next = [&]() -> std::size_t {
        if (drawn++ >= depth) return static_cast<std::size_t>(-1);
        return sampler.draw(rng);
      };
      out[static_cast<std::size_t>(k)] = series ? slope_series(sys, next, kSampleTol, depth + 1)
                                                : strong_stable_direction(sys, next, {kSampleTol, depth + 1}, back);
    });
  }
  failure.rethrow();
  return out;
}

std::vector<ProjPoint> sample_e_s(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                                  int depth, std::size_t count, std::uint64_t seed) {
  if (split.verdict != SplitVerdict::Certified) throw Error(ErrorCode::NotCertified, "splitting not certified");
  const SymbolSampler sampler(weights.p());
  std::vector<ProjPoint> out(count);
  const auto n = static_cast<std::int64_t>(count);
  if (split.triangular == TriangularSplit::CDominant) {
    std::fill(out.begin(), out.end(), ProjPoint(0.5 * kPi));
    return out;
  }
  ErrorSlot failure;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    failure.run([&] {
      CounterStream rng(seed, static_cast<std::uint64_t>(k));
      int drawn = 0;
      auto next = [&]() -> std::size_t {
        if (drawn++ >= depth) return static_cast<std::size_t>(-1);
        return sampler.draw(rng);
      };
      out[static_cast<std::size_t>(k)] = stable_direction(sys, next, {kSampleTol, depth + 1}, split.multicone);
    });
  }
  failure.rethrow();
  return out;
}

double min_angle_separation(const IfsSystem& sys, const BernoulliWeights& weights, const SplitReport& split,
                            int depth, std::size_t count, std::uint64_t seed) {
  const auto ess = sample_nu_ss(sys, weights, split, depth, count, seed);
  const auto es = sample_e_s(sys, weights, split, depth, count, mix64(seed));
  double best = 1.0;
  for (std::size_t k = 0; k < count; ++k) best = std::min(best, proj_metric(es[k], ess[k]));
  return best;
}

BackwardReport check_backward_non_overlapping(const std::vector<Mat2>& mats, const Multicone& m, double margin) {
  BackwardReport rep;
  rep.cone = m;
  rep.margin = kPi;
  std::vector<std::vector<ProjArc>> images(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const Mat2 inv = mats[i].inverse();
    for (const auto& arc : m.arcs()) {
      const ProjArc img = arc_image(inv, arc);
      const double c = m.clearance(img);
      if (c < rep.margin) rep.margin = c;
      if (!(c > margin) && rep.witness.empty())
        rep.witness = "inverse image under A_" + std::to_string(i + 1) + " leaves the cone";
      images[i].push_back(img);
    }
  }
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      for (const auto& u : images[i])
        for (const auto& v : images[j]) {
          const double g = arc_gap(u, v);
          if (g < rep.margin) rep.margin = g;
          if (!(g > margin) && rep.witness.empty())
            rep.witness = "inverse images under A_" + std::to_string(i + 1) + " and A_" + std::to_string(j + 1) + " meet";
        }
  rep.holds = rep.margin > margin;
  return rep;
}

BackwardReport find_backward_non_overlapping(const IfsSystem& sys, const SplitReport& split,
                                             const std::optional<Multicone>& user_cone, std::uint64_t seed) {
  const auto mats = sys.linear_parts();
  BackwardReport last;
  last.witness = "no candidate cone";
  if (user_cone) {
    last = check_backward_non_overlapping(mats, *user_cone);
    if (last.holds) return last;
  }
  if (split.verdict != SplitVerdict::Certified) {
    last.witness = "splitting not certified";
    return last;
  }
  const Multicone back = backward_seed_cone(split);
  if (auto r = check_backward_non_overlapping(mats, back); r.holds) return r;

  const auto samples = sample_nu_ss(sys, BernoulliWeights::uniform(sys.size()), split, 400, 2000, seed);
  std::vector<double> angles;
  angles.reserve(samples.size());
  for (const auto& p : samples) angles.push_back(p.theta());
  for (double eps : kInflation) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(8, sys.size() * 2); ++k) {
      const auto arcs = cluster_arcs(angles, k, eps);
      if (!arcs) continue;
      auto r = check_backward_non_overlapping(mats, Multicone(*arcs));
      if (r.holds) return r;
      if (k == 1 && eps == kInflation.front()) last = r;
    }
  }
  return last;
}

bool one_bunched(const std::vector<Mat2>& mats) {
  return std::all_of(mats.begin(), mats.end(), [](const Mat2& m) {
    const SingularPair sv = singular_values(m);
    return sv.alpha1 * sv.alpha1 <= sv.alpha2;
  });
}

bool one_bunched_exact(const std::vector<ExactAffine>& maps) {
  // alpha1^2 = x is the larger root of x^2 - T x + D^2. alpha1^2 <= alpha2
  // iff x^3 <= D^2 iff x <= r := D^2 (T + 1) / (T^2 - D^2), using x^2 = T x - D^2.
  for (const auto& f : maps) {
    const Rational t = f.a[0] * f.a[0] + f.a[1] * f.a[1] + f.a[2] * f.a[2] + f.a[3] * f.a[3];
    const Rational d = f.a[0] * f.a[3] - f.a[1] * f.a[2];
    const Rational d2 = d * d;
    const Rational r = d2 * (t + 1) / (t * t - d2);
    if (!(2 * r >= t && r * r - t * r + d2 >= 0)) return false;
  }
  return true;
}

bool one_bunched_triangular(const std::vector<Mat2>& mats) {
  return std::all_of(mats.begin(), mats.end(),
                     [](const Mat2& m) { return std::abs(m.a11) >= m.a22 * m.a22; });
}

}  // namespace affdim
