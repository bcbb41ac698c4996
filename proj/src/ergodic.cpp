#include "affdim/ergodic.hpp"

#include <cmath>
#include <vector>

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"
#include "affdim/rng.hpp"

namespace affdim {

namespace {


void check_weights(const IfsSystem& sys, const BernoulliWeights& weights) {
  if (weights.size() != sys.size())
    throw Error(ErrorCode::InvalidArgument, "weights have " + std::to_string(weights.size()) + " entries, system has " +
                                                std::to_string(sys.size()) + " maps");
}

struct MeanSd {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean and standard error of the mean, summed in index order.
MeanSd mean_stderr(const std::vector<double>& xs) {
  MeanSd r;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) r.mean += x;
  r.mean /= n;
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  // floor for summation rounding, so degenerate systems do not report 0
  r.stderr_ = std::max(r.stderr_, 1e-13 * (1.0 + std::abs(r.mean)));
  return r;
}

}  // namespace

double entropy(const BernoulliWeights& weights) {
  double h = 0.0;
  for (double p : weights.p())
    if (p > 0.0) h -= p * std::log(p);
  return std::max(0.0, h);
}

double det_exponent(const IfsSystem& sys, const BernoulliWeights& weights) {
  check_weights(sys, weights);
  double d = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) d -= weights[i] * std::log(std::abs(sys[i].linear.det()));
  return d;
}

ExponentTriple lyapunov_triangular(const IfsSystem& sys, const BernoulliWeights& weights) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "exact exponents need a12 = 0");
  check_weights(sys, weights);
  double la = 0.0, lc = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    la -= weights[i] * std::log(std::abs(sys[i].linear.a11));
    lc -= weights[i] * std::log(std::abs(sys[i].linear.a22));
  }
  ExponentTriple t;
  t.entropy = entropy(weights);
  t.chi_s = std::min(la, lc);
  t.chi_ss = std::max(la, lc);
  return t;
}

ExponentTriple lyapunov_monte_carlo(const IfsSystem& sys, const BernoulliWeights& weights, int n, int trials,
                                    std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs n >= 1");
  if (trials < 2) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least two trials");
  check_weights(sys, weights);
  const SymbolSampler sampler(weights.p());
  const auto mats = sys.linear_parts();
  std::vector<double> est(static_cast<std::size_t>(trials));
  ErrorSlot failure;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < trials; ++k) {
    failure.run([&] {
      CounterStream rng(seed, static_cast<std::uint64_t>(k));
      // Growth of a unit vector under A_{w_j} ... A_{w_1}; after the burn-in
      // its direction is close to stationary, so the mean log growth per
      // step has no 1/n bias.
      Vec2 u{1.0, 0.0};
      double log_growth = 0.0;
      for (int j = 0; j < burn_in(n) + n; ++j) {
        const Vec2 v = mats[sampler.draw(rng)] * u;
        const double r = norm(v);
        if (j >= burn_in(n)) log_growth += std::log(r);
        u = (1.0 / r) * v;
      }
      est[static_cast<std::size_t>(k)] = -log_growth / n;
    });
  }
  failure.rethrow();
  const MeanSd ms = mean_stderr(est);
  ExponentTriple t;
  t.entropy = entropy(weights);
  t.chi_s = ms.mean;
  t.chi_ss = det_exponent(sys, weights) - ms.mean;
  t.stderr_s = ms.stderr_;
  t.stderr_ss = ms.stderr_;
  return t;
}

DirectionalEstimate lyapunov_from_directions(const IfsSystem& sys, const BernoulliWeights& weights,
                                             const SplitReport& split, int depth, std::size_t count,
                                             std::uint64_t seed) {
  check_weights(sys, weights);
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const auto dirs = sample_e_s(sys, weights, split, depth, count, seed);
  const SymbolSampler sampler(weights.p());
  std::vector<double> vals(count);
  // The next symbol comes from a stream disjoint from the ones used for the past.
  const std::uint64_t next_seed = mix64(seed ^ 0x5bd1e995ULL);
  for (std::size_t k = 0; k < count; ++k) {
    CounterStream rng(next_seed, k);
    const Vec2 u = dirs[k].unit();
    vals[k] = -std::log(norm(sys[sampler.draw(rng)].linear * u));
  }
  const MeanSd ms = mean_stderr(vals);
  return {ms.mean, ms.stderr_};
}

double lyapunov_dimension(const ExponentTriple& t) {
  if (!(t.chi_s > 0.0)) throw Error(ErrorCode::BadExponents, "Lyapunov dimension needs chi_s > 0");
  const double d = std::min({2.0, t.entropy / t.chi_s, 1.0 + (t.entropy - t.chi_s) / t.chi_ss});
  return std::max(0.0, d);
}

}  // namespace affdim
