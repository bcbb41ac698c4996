#pragma once

// Entropy, Lyapunov exponents and the Lyapunov dimension of Bernoulli
// self-affine measures. All quantities are in nats per symbol.

#include <cstdint>

#include "affdim/ifs.hpp"
#include "affdim/splitting.hpp"

namespace affdim {

struct ExponentTriple {
  double entropy = 0.0;
  double chi_s = 0.0;   ///< weaker contraction rate
  double chi_ss = 0.0;  ///< stronger contraction rate
  double stderr_s = 0.0;
  double stderr_ss = 0.0;
};

/// -sum p_i log p_i.
double entropy(const BernoulliWeights& weights);

/// -sum p_i log |det A_i|, which equals chi_s + chi_ss.
double det_exponent(const IfsSystem& sys, const BernoulliWeights& weights);

/// Exact exponents of a lower triangular system. Throws NotTriangular.
ExponentTriple lyapunov_triangular(const IfsSystem& sys, const BernoulliWeights& weights);

/// Unweighted steps run before a Monte Carlo trial starts counting.
inline int burn_in(int n) { return 16 + n / 4; }

/// chi_s as the mean over trials of -(1/n) log of the growth of a unit
/// vector over n steps of a random product, after burn_in(n) steps; chi_ss
/// from the determinant identity. Trial k draws from CounterStream(seed, k).
ExponentTriple lyapunov_monte_carlo(const IfsSystem& sys, const BernoulliWeights& weights, int n, int trials,
                                    std::uint64_t seed);

struct DirectionalEstimate {
  double chi_s = 0.0;
  double stderr_s = 0.0;
};

/// -E log ||A_{i_0} u|| for u spanning e_s of an independent past: a cross
/// check of chi_s under a certified splitting.
DirectionalEstimate lyapunov_from_directions(const IfsSystem& sys, const BernoulliWeights& weights,
                                             const SplitReport& split, int depth, std::size_t count,
                                             std::uint64_t seed);

/// min{2, h/chi_s, 1 + (h - chi_s)/chi_ss}.
double lyapunov_dimension(const ExponentTriple& t);

}  // namespace affdim
