#pragma once

// Subadditive pressure of a matrix family, its finite-n approximants and
// roots, and the closed forms for lower triangular families.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "affdim/ifs.hpp"
#include "affdim/splitting.hpp"

namespace affdim {

inline constexpr std::size_t kEnumerationCap = 20'000'000;

/// (1/n) log sum_{|w|=n} phi^s(A_w), summed over all words in log space.
/// Throws EnumerationTooLarge when N^n exceeds cap.
double pressure_n(const std::vector<Mat2>& mats, double s, int n, std::size_t cap = kEnumerationCap);
double pressure_n(const IfsSystem& sys, double s, int n, std::size_t cap = kEnumerationCap);

struct RootRow {
  int n = 0;
  double root = 0.0;
};

struct RootEstimate {
  double s_upper = 0.0;  ///< root at the largest n, an upper bound for the true root
  std::vector<RootRow> history;
  bool converged = false;  ///< last two roots within 10 tol (stopping heuristic)
  double tol = 0.0;
  /// Root of (log Z_n - log Z_{n/2}) / (n/2) at the largest even n. Heuristic,
  /// never used as a bound.
  std::optional<double> extrapolated;
};

/// {2, 4, 8, 12} with entries dropped once N^n exceeds the cap.
std::vector<int> default_schedule(std::size_t n_maps, std::size_t cap = kEnumerationCap);

/// Bisects s -> P_n(s) on [0, 4] to width tol for each n of the schedule.
RootEstimate pressure_root(const std::vector<Mat2>& mats, const std::vector<int>& schedule, double tol = 1e-10,
                           std::size_t cap = kEnumerationCap);

/// Closed-form pressure of a lower triangular family.
double triangular_pressure(const IfsSystem& sys, double s);

struct TriangularRoots {
  TriangularSplit kind = TriangularSplit::None;
  double s1 = 0.0;
  double s2 = 0.0;
  /// Root of the closed-form pressure: min(s1, s2), or the root of the
  /// determinant branch when that minimum reaches 2.
  double pressure_root = 0.0;
};

/// Throws NotTriangular or NoDomination.
TriangularRoots triangular_roots(const IfsSystem& sys);

/// Root of the strictly decreasing f on [lo, hi] by bisection to width tol.
/// Throws NoSignChange unless f(lo) >= 0 >= f(hi).
double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace affdim
