#include "affdim/ifs.hpp"

#include <cmath>
#include <numeric>

#include "affdim/error.hpp"
#include "affdim/rng.hpp"

namespace affdim {

AffineMap ExactAffine::to_double() const {
  return {{affdim::to_double(a[0]), affdim::to_double(a[1]), affdim::to_double(a[2]), affdim::to_double(a[3])},
          {affdim::to_double(t[0]), affdim::to_double(t[1])}};
}

ExactAffine compose(const ExactAffine& f, const ExactAffine& g) {
  ExactAffine h;
  h.a[0] = f.a[0] * g.a[0] + f.a[1] * g.a[2];
  h.a[1] = f.a[0] * g.a[1] + f.a[1] * g.a[3];
  h.a[2] = f.a[2] * g.a[0] + f.a[3] * g.a[2];
  h.a[3] = f.a[2] * g.a[1] + f.a[3] * g.a[3];
  h.t[0] = f.a[0] * g.t[0] + f.a[1] * g.t[1] + f.t[0];
  h.t[1] = f.a[2] * g.t[0] + f.a[3] * g.t[1] + f.t[1];
  return h;
}

IfsSystem::IfsSystem(std::vector<AffineMap> maps, std::string label)
    : maps_(std::move(maps)), label_(std::move(label)) {
  validate();
}

IfsSystem::IfsSystem(std::vector<ExactAffine> exact, std::string label) : label_(std::move(label)) {
  maps_.reserve(exact.size());
  for (const auto& e : exact) maps_.push_back(e.to_double());
  exact_ = std::move(exact);
  validate();
}

void IfsSystem::validate() const {
  if (maps_.empty()) throw Error(ErrorCode::InvalidArgument, "an IFS needs at least one map");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Mat2& a = maps_[i].linear;
    if (std::abs(a.det()) < kSingularFloor)
      throw Error(ErrorCode::SingularMatrix, "map " + std::to_string(i + 1) + " is singular");
    if (!(operator_norm(a) < 1.0))
      throw Error(ErrorCode::InvalidArgument, "map " + std::to_string(i + 1) + " is not contracting");
  }
}

std::vector<Mat2> IfsSystem::linear_parts() const {
  std::vector<Mat2> out;
  out.reserve(maps_.size());
  for (const auto& f : maps_) out.push_back(f.linear);
  return out;
}

bool IfsSystem::lower_triangular() const {
  return std::all_of(maps_.begin(), maps_.end(), [](const AffineMap& f) { return f.linear.lower_triangular(); });
}

double IfsSystem::max_contraction() const {
  double r = 0.0;
  for (const auto& f : maps_) r = std::max(r, operator_norm(f.linear));
  return r;
}

BernoulliWeights::BernoulliWeights(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorCode::InvalidArgument, "empty probability vector");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "probabilities must sum to one");
  for (double& v : p_) v /= sum;
}

BernoulliWeights BernoulliWeights::uniform(std::size_t n) {
  return BernoulliWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

BernoulliWeights BernoulliWeights::from_masses(const std::vector<double>& masses) {
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "masses must be positive");
  std::vector<double> p;
  p.reserve(masses.size());
  for (double m : masses) p.push_back(m / total);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return BernoulliWeights(std::move(p));
}

void validate_word(const IfsSystem& sys, const Word& w) {
  for (std::size_t s : w)
    if (s >= sys.size()) throw Error(ErrorCode::BadSymbol, "symbol " + std::to_string(s) + " out of range");
}

AffineMap compose_word(const IfsSystem& sys, const Word& w) {
  validate_word(sys, w);
  AffineMap acc{Mat2::identity(), {}};
  for (std::size_t s : w) acc = compose(acc, sys[s]);
  return acc;
}

ExactAffine compose_word_exact(const IfsSystem& sys, const Word& w) {
  if (!sys.has_exact()) throw Error(ErrorCode::InvalidArgument, "system has no exact representation");
  validate_word(sys, w);
  ExactAffine acc{{Rational(1), Rational(0), Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
  for (std::size_t s : w) acc = compose(acc, (*sys.exact())[s]);
  return acc;
}

double attractor_radius(const IfsSystem& sys, Vec2 center) {
  const double rho = sys.max_contraction();
  double r = 0.0;
  for (const auto& f : sys.maps()) r = std::max(r, norm(f(center) - center));
  return r / (1.0 - rho);
}

ProjectionResult natural_projection(const IfsSystem& sys, const Word& w, Vec2 seed) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "natural projection needs a non-empty word");
  const AffineMap f = compose_word(sys, w);
  return {f(seed), operator_norm(f.linear) * attractor_radius(sys, seed)};
}

double sample_truncation_radius(const IfsSystem& sys, int depth, Vec2 start) {
  return std::pow(sys.max_contraction(), depth) * attractor_radius(sys, start);
}

std::vector<Vec2> sample_measure(const IfsSystem& sys, const BernoulliWeights& weights, const SampleOptions& opt) {
  if (opt.depth < 1) throw Error(ErrorCode::InvalidArgument, "sampling depth must be >= 1");
  if (opt.count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  if (weights.size() != sys.size()) throw Error(ErrorCode::InvalidArgument, "weights and maps differ in length");
  const SymbolSampler sampler(weights.p());
  const auto& maps = sys.maps();
  std::vector<Vec2> out(opt.count);
  const auto count = static_cast<std::int64_t>(opt.count);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    CounterStream rng(opt.seed, static_cast<std::uint64_t>(k));
    Vec2 x = opt.start;
    for (int d = 0; d < opt.depth; ++d) x = maps[sampler.draw(rng)](x);
    out[static_cast<std::size_t>(k)] = x;
  }
  return out;
}

Vec2 measure_mean(const IfsSystem& sys, const BernoulliWeights& weights) {
  Mat2 a{0.0, 0.0, 0.0, 0.0};
  Vec2 t{};
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double p = weights[i];
    const Mat2& m = sys[i].linear;
    a = Mat2{a.a11 + p * m.a11, a.a12 + p * m.a12, a.a21 + p * m.a21, a.a22 + p * m.a22};
    t = t + p * sys[i].translation;
  }
  const Mat2 lhs{1.0 - a.a11, -a.a12, -a.a21, 1.0 - a.a22};
  return lhs.inverse() * t;
}

namespace {

/// Calls visit(word) for every word of length n over {0..n_symbols-1} in
/// odometer order (last symbol fastest).
template <class Visit>
void for_each_word(std::size_t n_symbols, int depth, Visit&& visit) {
  Word w(static_cast<std::size_t>(depth), 0);
  while (true) {
    visit(w);
    int pos = depth - 1;
    while (pos >= 0 && ++w[static_cast<std::size_t>(pos)] == n_symbols) w[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return;
  }
}

double checked_count(std::size_t n, int depth) {
  double c = std::pow(static_cast<double>(n), depth);
  if (c > 2e7) throw Error(ErrorCode::EnumerationTooLarge, "iterate system too large");
  return c;
}

}  // namespace

IfsSystem subsystem_excluding(const IfsSystem& sys, int depth, const std::vector<std::size_t>& excluded) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "sub-system depth must be >= 1");
  checked_count(sys.size(), depth);
  for (std::size_t e : excluded)
    if (e >= sys.size()) throw Error(ErrorCode::BadSymbol, "excluded symbol out of range");
  auto in_excluded = [&](std::size_t s) { return std::find(excluded.begin(), excluded.end(), s) != excluded.end(); };
  std::vector<AffineMap> maps;
  std::vector<ExactAffine> exact;
  for_each_word(sys.size(), depth, [&](const Word& w) {
    if (std::all_of(w.begin(), w.end(), in_excluded)) return;
    if (sys.has_exact())
      exact.push_back(compose_word_exact(sys, w));
    else
      maps.push_back(compose_word(sys, w));
  });
  std::string label = sys.label() + " sub-system depth " + std::to_string(depth);
  if (sys.has_exact()) return IfsSystem(std::move(exact), label);
  return IfsSystem(std::move(maps), label);
}

IfsSystem iterate_system(const IfsSystem& sys, int depth) { return subsystem_excluding(sys, depth, {}); }

BernoulliWeights iterate_weights(const BernoulliWeights& weights, int depth) {
  checked_count(weights.size(), depth);
  std::vector<double> p;
  for_each_word(weights.size(), depth, [&](const Word& w) {
    double q = 1.0;
    for (std::size_t s : w) q *= weights[s];
    p.push_back(q);
  });
  return BernoulliWeights::from_masses(p);
}

}  // namespace affdim
