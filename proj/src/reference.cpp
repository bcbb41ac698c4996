#include "affdim/reference.hpp"

#include <cmath>
#include <set>

#include "affdim/error.hpp"
#include "affdim/rng.hpp"

namespace affdim::reference {

namespace {

/// Advances an odometer over {0..base-1}^len; false after the last word.
bool next_word(std::vector<std::size_t>& w, std::size_t base) {
  for (std::size_t k = w.size(); k-- > 0;) {
    if (++w[k] < base) return true;
    w[k] = 0;
  }
  return false;
}

}  // namespace

double pressure_n(const std::vector<Mat2>& mats, double s, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n >= 1");
  std::vector<std::size_t> w(static_cast<std::size_t>(n), 0);
  std::vector<double> logs;
  do {
    Mat2 m = Mat2::identity();
    double scale = 0.0;
    for (std::size_t sym : w) {
      m = m * mats[sym];
      const double a = m.max_abs();
      m = (1.0 / a) * m;
      scale += std::log(a);
    }
    const SingularPair sv = singular_values(m);
    logs.push_back(log_phi_s(std::log(sv.alpha1) + scale, std::log(sv.alpha2) + scale, s));
  } while (next_word(w, mats.size()));
  double mx = logs.front();
  for (double x : logs) mx = std::max(mx, x);
  double sum = 0.0;
  for (double x : logs) sum += std::exp(x - mx);
  return (mx + std::log(sum)) / n;
}

ExponentTriple lyapunov_monte_carlo(const IfsSystem& sys, const BernoulliWeights& weights, int n, int trials,
                                    std::uint64_t seed) {
  const SymbolSampler sampler(weights.p());
  std::vector<double> est;
  for (int k = 0; k < trials; ++k) {
    CounterStream rng(seed, static_cast<std::uint64_t>(k));
    Vec2 u{1.0, 0.0};
    double log_growth = 0.0;
    for (int j = 0; j < burn_in(n) + n; ++j) {
      u = sys[sampler.draw(rng)].linear * u;
      const double r = norm(u);
      if (j >= burn_in(n)) log_growth += std::log(r);
      u = (1.0 / r) * u;
    }
    est.push_back(-log_growth / n);
  }
  double mean = 0.0;
  for (double x : est) mean += x;
  mean /= trials;
  double ss = 0.0;
  for (double x : est) ss += (x - mean) * (x - mean);
  ExponentTriple t;
  t.entropy = entropy(weights);
  t.chi_s = mean;
  t.chi_ss = det_exponent(sys, weights) - mean;
  t.stderr_s = t.stderr_ss = std::max(std::sqrt(ss / (trials - 1.0) / trials), 1e-13 * (1.0 + std::abs(mean)));
  return t;
}

std::optional<Rational> delta_n_pairwise(const std::vector<ExactLineMap>& maps, int n) {
  std::vector<ExactLineMap> all;
  std::vector<std::size_t> w(static_cast<std::size_t>(n), 0);
  do {
    ExactLineMap g{Rational(1), Rational(0)};
    for (std::size_t sym : w) g = {g.beta * maps[sym].beta, g.beta * maps[sym].gamma + g.gamma};
    all.push_back(g);
  } while (next_word(w, maps.size()));
  std::optional<Rational> best;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].beta != all[j].beta) continue;
      const Rational d = abs(all[i].gamma - all[j].gamma);
      if (!best || d < *best) best = d;
    }
  return best;
}

std::size_t box_count(const std::vector<Vec2>& points, int k) {
  std::set<std::pair<long long, long long>> cells;
  const double scale = std::ldexp(1.0, k);
  for (const auto& p : points)
    cells.emplace(static_cast<long long>(std::floor(p.x * scale)), static_cast<long long>(std::floor(p.y * scale)));
  return cells.size();
}

std::uint64_t close_pairs(const std::vector<Vec2>& points, double r) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (norm(points[j] - points[i]) < r) ++c;
  return c;
}

}  // namespace affdim::reference
