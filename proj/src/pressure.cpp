#include "affdim/pressure.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"

namespace affdim {

namespace {

constexpr std::size_t kCacheWords = 4'000'000;

std::size_t word_count(std::size_t n_maps, int n, std::size_t cap) {
  double c = std::pow(static_cast<double>(n_maps), n);
  if (c > static_cast<double>(cap))
    throw Error(ErrorCode::EnumerationTooLarge,
                std::to_string(n_maps) + "^" + std::to_string(n) + " words exceed the cap " + std::to_string(cap));
  return static_cast<std::size_t>(c);
}

/// Streaming log-sum-exp.
struct LogSum {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double x) {
    if (x <= max) {
      sum += std::exp(x - max);
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  void merge(const LogSum& o) {
    if (o.sum == 0.0) return;
    if (sum == 0.0) {
      *this = o;
      return;
    }
    if (o.max <= max) {
      sum += o.sum * std::exp(o.max - max);
    } else {
      sum = sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    }
  }
  double value() const { return max + std::log(sum); }
};

/// log singular values of all products A_w, |w| = n, grouped in blocks of
/// fixed leading symbols. The block layout depends only on (N, n).
class Spectrum {
 public:
  Spectrum(const std::vector<Mat2>& mats, int n, std::size_t cap) : mats_(mats), n_(n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "pressure needs n >= 1");
    if (mats.empty()) throw Error(ErrorCode::InvalidArgument, "empty matrix family");
    const std::size_t words = word_count(mats.size(), n, cap);
    prefix_len_ = 0;
    blocks_ = 1;
    while (prefix_len_ < n && blocks_ < 64) {
      ++prefix_len_;
      blocks_ *= mats.size();
    }
    cached_ = words <= kCacheWords;
    if (cached_) {
      data_.resize(blocks_);
      ErrorSlot failure;
      const auto nb = static_cast<std::int64_t>(blocks_);
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t b = 0; b < nb; ++b) {
        failure.run([&] {
          auto& out = data_[static_cast<std::size_t>(b)];
          visit_block(static_cast<std::size_t>(b), [&](double la1, double la2) {
            out.push_back(la1);
            out.push_back(la2);
          });
        });
      }
      failure.rethrow();
    }
  }

  /// log sum_w phi^s(A_w).
  double log_sum(double s) const {
    std::vector<LogSum> parts(blocks_);
    ErrorSlot failure;
    const auto nb = static_cast<std::int64_t>(blocks_);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < nb; ++b) {
      failure.run([&] {
        LogSum acc;
        if (cached_) {
          const auto& d = data_[static_cast<std::size_t>(b)];
          for (std::size_t k = 0; k < d.size(); k += 2) acc.add(log_phi_s(d[k], d[k + 1], s));
        } else {
          visit_block(static_cast<std::size_t>(b), [&](double la1, double la2) { acc.add(log_phi_s(la1, la2, s)); });
        }
        parts[static_cast<std::size_t>(b)] = acc;
      });
    }
    failure.rethrow();
    LogSum total;
    for (const auto& p : parts) total.merge(p);
    return total.value();
  }

  int n() const { return n_; }

 private:
  template <class Emit>
  void visit_block(std::size_t block, Emit&& emit) const {
    const std::size_t nm = mats_.size();
    // Leading symbols of the block, most significant first.
    std::vector<std::size_t> lead(static_cast<std::size_t>(prefix_len_));
    for (int k = prefix_len_ - 1; k >= 0; --k) {
      lead[static_cast<std::size_t>(k)] = block % nm;
      block /= nm;
    }
    Mat2 m = Mat2::identity();
    double log_scale = 0.0;
    for (std::size_t s : lead) step(m, log_scale, mats_[s]);
    descend(m, log_scale, n_ - prefix_len_, emit);
  }

  static void step(Mat2& m, double& log_scale, const Mat2& a) {
    m = m * a;
    const double s = m.max_abs();
    m = (1.0 / s) * m;
    log_scale += std::log(s);
  }

  template <class Emit>
  void descend(const Mat2& m, double log_scale, int remaining, Emit& emit) const {
    if (remaining == 0) {
      const SingularPair sv = singular_values(m);
      emit(std::log(sv.alpha1) + log_scale, std::log(sv.alpha2) + log_scale);
      return;
    }
    for (const auto& a : mats_) {
      Mat2 next = m;
      double ls = log_scale;
      step(next, ls, a);
      descend(next, ls, remaining - 1, emit);
    }
  }

  const std::vector<Mat2>& mats_;
  int n_;
  int prefix_len_ = 0;
  std::size_t blocks_ = 1;
  bool cached_ = false;
  std::vector<std::vector<double>> data_;
};

}  // namespace

double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (f(lo) < 0.0 || f(hi) > 0.0) throw Error(ErrorCode::NoSignChange, "no root in the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double pressure_n(const std::vector<Mat2>& mats, double s, int n, std::size_t cap) {
  if (s < 0.0) throw Error(ErrorCode::NegativeExponent, "pressure needs s >= 0");
  const Spectrum sp(mats, n, cap);
  return sp.log_sum(s) / n;
}

double pressure_n(const IfsSystem& sys, double s, int n, std::size_t cap) {
  return pressure_n(sys.linear_parts(), s, n, cap);
}

std::vector<int> default_schedule(std::size_t n_maps, std::size_t cap) {
  std::vector<int> out;
  for (int n : {2, 4, 8, 12})
    if (std::pow(static_cast<double>(n_maps), n) <= static_cast<double>(cap)) out.push_back(n);
  if (out.empty()) out.push_back(1);
  return out;
}

RootEstimate pressure_root(const std::vector<Mat2>& mats, const std::vector<int>& schedule, double tol,
                           std::size_t cap) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty pressure schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw Error(ErrorCode::InvalidArgument, "schedule must increase");
  for (int n : schedule) word_count(mats.size(), n, cap);

  RootEstimate est;
  est.tol = tol;
  for (int n : schedule) {
    const Spectrum sp(mats, n, cap);
    auto p = [&](double s) { return sp.log_sum(s) / n; };
    if (p(4.0) > 0.0) throw Error(ErrorCode::NoSignChange, "P_" + std::to_string(n) + "(4) > 0");
    est.history.push_back({n, bisect_decreasing(p, 0.0, 4.0, tol)});
  }
  est.s_upper = est.history.back().root;
  if (est.history.size() >= 2) {
    const double d = est.history.back().root - est.history[est.history.size() - 2].root;
    est.converged = std::abs(d) < 10.0 * tol;
  }

  for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
    if (*it % 2 != 0) continue;
    const int n = *it;
    const Spectrum full(mats, n, cap), half(mats, n / 2, cap);
    auto f = [&](double s) { return (full.log_sum(s) - half.log_sum(s)) / (n / 2); };
    if (f(0.0) > 0.0 && f(4.0) < 0.0) est.extrapolated = bisect_decreasing(f, 0.0, 4.0, tol);
    break;
  }
  return est;
}

double triangular_pressure(const IfsSystem& sys, double s) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "closed-form pressure needs a12 = 0");
  if (s < 0.0) throw Error(ErrorCode::NegativeExponent, "pressure needs s >= 0");
  double x = 0.0, y = 0.0;
  for (const auto& f : sys.maps()) {
    const double a = std::abs(f.linear.a11), c = std::abs(f.linear.a22);
    if (s < 1.0) {
      x += std::pow(a, s);
      y += std::pow(c, s);
    } else if (s < 2.0) {
      x += a * std::pow(c, s - 1.0);
      y += c * std::pow(a, s - 1.0);
    } else {
      x += std::pow(a * c, 0.5 * s);
    }
  }
  return std::log(s < 2.0 ? std::max(x, y) : x);
}

namespace {

/// Root of sum_i g_i(s) = 1 for decreasing g, bracket grown until negative.
double solve_sum(const std::function<double(double)>& sum) {
  auto f = [&](double s) { return sum(s) - 1.0; };
  if (f(0.0) <= 0.0) return 0.0;
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorCode::NoSignChange, "no root below 1e6");
  }
  return bisect_decreasing(f, 0.0, hi, 1e-14);
}

}  // namespace

TriangularRoots triangular_roots(const IfsSystem& sys) {
  TriangularRoots r;
  r.kind = check_triangular_split(sys);
  if (r.kind == TriangularSplit::None) throw Error(ErrorCode::NoDomination, "neither |a_i| > |c_i| nor |a_i| < |c_i| for all i");
  std::vector<double> u, v;  // dominant and weak diagonal moduli
  for (const auto& f : sys.maps()) {
    const double a = std::abs(f.linear.a11), c = std::abs(f.linear.a22);
    u.push_back(r.kind == TriangularSplit::ADominant ? a : c);
    v.push_back(r.kind == TriangularSplit::ADominant ? c : a);
  }
  r.s1 = solve_sum([&](double s) {
    double t = 0.0;
    for (double x : u) t += std::pow(x, s);
    return t;
  });
  r.s2 = solve_sum([&](double s) {
    double t = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) t += u[i] * std::pow(v[i], s - 1.0);
    return t;
  });
  r.pressure_root = std::min(r.s1, r.s2);
  if (r.pressure_root >= 2.0) {
    r.pressure_root = solve_sum([&](double s) {
      double t = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) t += std::pow(u[i] * v[i], 0.5 * s);
      return t;
    });
  }
  return r;
}

}  // namespace affdim
