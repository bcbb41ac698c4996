#pragma once

// Serial, deliberately plain versions of the parallel kernels. They back
// the equivalence tests and the benchmark baselines.

#include <cstdint>
#include <optional>
#include <vector>

#include "affdim/ergodic.hpp"
#include "affdim/hochman.hpp"
#include "affdim/ifs.hpp"

namespace affdim::reference {

/// (1/n) log sum phi^s(A_w), each product formed from scratch.
double pressure_n(const std::vector<Mat2>& mats, double s, int n);

/// Same estimator and streams as affdim::lyapunov_monte_carlo, one thread.
ExponentTriple lyapunov_monte_carlo(const IfsSystem& sys, const BernoulliWeights& weights, int n, int trials,
                                    std::uint64_t seed);

/// Minimum over all pairs of distinct words of |g_u(0) - g_v(0)| among pairs
/// with equal ratio; nullopt when no such pair exists. Exact.
std::optional<Rational> delta_n_pairwise(const std::vector<ExactLineMap>& maps, int n);

/// Occupied dyadic boxes counted with an ordered set.
std::size_t box_count(const std::vector<Vec2>& points, int k);

/// Pairs closer than r, counted over all pairs.
std::uint64_t close_pairs(const std::vector<Vec2>& points, double r);

}  // namespace affdim::reference
