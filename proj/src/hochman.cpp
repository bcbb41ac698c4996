#include "affdim/hochman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"

namespace affdim {

namespace {

using boost::multiprecision::cpp_int;

double log_abs(const cpp_int& x) {
  const cpp_int a = abs(x);
  const auto bits = msb(a);
  if (bits < 900) return std::log(a.convert_to<double>());
  const auto shift = bits - 60;
  const cpp_int top = a >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_rational(const Rational& r) { return log_abs(numerator(r)) - log_abs(denominator(r)); }

/// Sign of x - y for rationals with double approximations dx, dy.
int compare_keyed(double dx, double dy, const Rational& x, const Rational& y) {
  if (std::abs(dx - dy) > 1e-12 * std::max(std::abs(dx), std::abs(dy))) return dx < dy ? -1 : 1;
  const cpp_int lhs = numerator(x) * denominator(y);
  const cpp_int rhs = numerator(y) * denominator(x);
  return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
}

void check_size(std::size_t n_maps, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "delta_n needs n >= 1");
  if (std::pow(static_cast<double>(n_maps), n) > static_cast<double>(cap))
    throw Error(ErrorCode::EnumerationTooLarge,
                std::to_string(n_maps) + "^" + std::to_string(n) + " compositions exceed the cap");
}

/// All depth-n compositions g_w, words in odometer order. The first symbol
/// is the outermost map; partitions by that symbol run in parallel.
template <class Map, class Compose>
std::vector<Map> compositions(const std::vector<Map>& gens, int n, Compose&& compose) {
  std::vector<Map> tail = gens;
  for (int k = 1; k < n - 1; ++k) {
    std::vector<Map> next;
    next.reserve(tail.size() * gens.size());
    for (const auto& g : gens)
      for (const auto& t : tail) next.push_back(compose(g, t));
    tail = std::move(next);
  }
  if (n == 1) return gens;
  std::vector<std::vector<Map>> parts(gens.size());
  ErrorSlot failure;
  const auto ng = static_cast<std::int64_t>(gens.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < ng; ++s) {
    failure.run([&] {
      auto& part = parts[static_cast<std::size_t>(s)];
      part.reserve(tail.size());
      for (const auto& t : tail) part.push_back(compose(gens[static_cast<std::size_t>(s)], t));
    });
  }
  failure.rethrow();
  std::vector<Map> all;
  all.reserve(tail.size() * gens.size());
  for (auto& p : parts) all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return all;
}

DeltaValue delta_exact(const std::vector<ExactLineMap>& gens, int n) {
  auto all = compositions(gens, n, [](const ExactLineMap& f, const ExactLineMap& g) {
    return ExactLineMap{f.beta * g.beta, f.beta * g.gamma + f.gamma};
  });
  // Sort indices on double keys; keys within rounding distance fall back to
  // exact comparison, so the order is the exact (beta, gamma) order.
  struct Key {
    double beta, gamma;
    std::uint32_t at;
  };
  std::vector<Key> keys(all.size());
  for (std::size_t k = 0; k < all.size(); ++k)
    keys[k] = {to_double(all[k].beta), to_double(all[k].gamma), static_cast<std::uint32_t>(k)};
  std::sort(keys.begin(), keys.end(), [&](const Key& x, const Key& y) {
    const int c = compare_keyed(x.beta, y.beta, all[x.at].beta, all[y.at].beta);
    if (c != 0) return c < 0;
    return compare_keyed(x.gamma, y.gamma, all[x.at].gamma, all[y.at].gamma) < 0;
  });
  std::optional<Rational> best;
  for (std::size_t k = 1; k < keys.size(); ++k) {
    const ExactLineMap& cur = all[keys[k].at];
    const ExactLineMap& prev = all[keys[k - 1].at];
    if (compare_keyed(keys[k].beta, keys[k - 1].beta, cur.beta, prev.beta) != 0) continue;
    Rational d = cur.gamma - prev.gamma;
    if (!best || d < *best) best = std::move(d);
  }
  DeltaValue v;
  if (!best) {
    v.infinite = true;
    v.value = std::numeric_limits<double>::infinity();
    return v;
  }
  v.value = to_double(*best);
  v.exact = *best;
  return v;
}

DeltaValue delta_float(const std::vector<LineMap>& gens, int n) {
  auto all = compositions(gens, n, [](const LineMap& f, const LineMap& g) {
    return LineMap{f.beta * g.beta, f.beta * g.gamma + f.gamma};
  });
  std::sort(all.begin(), all.end(), [](const LineMap& x, const LineMap& y) {
    return x.beta < y.beta || (x.beta == y.beta && x.gamma < y.gamma);
  });
  // Groups of ratios within 1e-12 relative of the group's first entry.
  double best = std::numeric_limits<double>::infinity();
  std::size_t start = 0;
  while (start < all.size()) {
    std::size_t end = start + 1;
    while (end < all.size() && std::abs(all[end].beta - all[start].beta) <= 1e-12 * std::abs(all[start].beta)) ++end;
    if (end - start > 1) {
      std::vector<double> g;
      for (std::size_t k = start; k < end; ++k) g.push_back(all[k].gamma);
      std::sort(g.begin(), g.end());
      for (std::size_t k = 1; k < g.size(); ++k) best = std::min(best, g[k] - g[k - 1]);
    }
    start = end;
  }
  DeltaValue v;
  v.infinite = std::isinf(best);
  v.value = best;
  return v;
}

}  // namespace

LineIfs::LineIfs(std::vector<LineMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw Error(ErrorCode::InvalidArgument, "line IFS needs at least one map");
  for (const auto& m : maps_)
    if (!(std::abs(m.beta) > 0.0 && std::abs(m.beta) < 1.0))
      throw Error(ErrorCode::InvalidArgument, "line IFS ratios need 0 < |beta| < 1");
}

LineIfs::LineIfs(std::vector<ExactLineMap> exact) {
  for (const auto& m : exact) {
    if (!(abs(m.beta) > 0 && abs(m.beta) < 1))
      throw Error(ErrorCode::InvalidArgument, "line IFS ratios need 0 < |beta| < 1");
    maps_.push_back({to_double(m.beta), to_double(m.gamma)});
  }
  if (maps_.empty()) throw Error(ErrorCode::InvalidArgument, "line IFS needs at least one map");
  exact_ = std::move(exact);
}

double LineIfs::min_abs_beta() const {
  double m = 1.0;
  for (const auto& f : maps_) m = std::min(m, std::abs(f.beta));
  return m;
}

LineIfs parse_line_ifs(const std::string& text) {
  std::vector<ExactLineMap> maps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::ParseError, "expected 'beta,gamma' but got '" + item + "'");
    maps.push_back({parse_rational(item.substr(0, comma)), parse_rational(item.substr(comma + 1))});
  }
  return LineIfs(std::move(maps));
}

LineIfs horizontal_ifs(const IfsSystem& sys) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "horizontal IFS needs a12 = 0");
  if (sys.has_exact()) {
    std::vector<ExactLineMap> out;
    for (const auto& f : *sys.exact()) out.push_back({f.a[0], f.t[0]});
    return LineIfs(std::move(out));
  }
  std::vector<LineMap> out;
  for (const auto& f : sys.maps()) out.push_back({f.linear.a11, f.translation.x});
  return LineIfs(std::move(out));
}

LineIfs direction_ifs(const IfsSystem& sys) {
  if (!sys.lower_triangular()) throw Error(ErrorCode::NotTriangular, "direction IFS needs a12 = 0");
  if (sys.has_exact()) {
    std::vector<ExactLineMap> out;
    for (const auto& f : *sys.exact()) out.push_back({f.a[0] / f.a[3], -f.a[2] / f.a[3]});
    return LineIfs(std::move(out));
  }
  std::vector<LineMap> out;
  for (const auto& f : sys.maps()) out.push_back({f.linear.a11 / f.linear.a22, -f.linear.a21 / f.linear.a22});
  return LineIfs(std::move(out));
}

std::string DeltaValue::to_string() const {
  if (infinite) return "inf";
  if (exact) return affdim::to_string(*exact);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

DeltaValue delta_n(const LineIfs& ifs, int n, bool exact, std::size_t cap) {
  check_size(ifs.size(), n, cap);
  if (exact && ifs.has_exact()) return delta_exact(*ifs.exact(), n);
  return delta_float(ifs.maps(), n);
}

std::string_view to_string(HochmanVerdict v) {
  switch (v) {
    case HochmanVerdict::TrendBounded: return "TrendBounded";
    case HochmanVerdict::ExactOverlap: return "ExactOverlap";
    case HochmanVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

DeltaReport hochman_rate(const LineIfs& ifs, int n_max, bool exact, std::size_t cap) {
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "hochman_rate needs n_max >= 2");
  check_size(ifs.size(), n_max, cap);
  DeltaReport rep;
  rep.exact = exact && ifs.has_exact();
  rep.rate_bound = -1.5 * std::log(ifs.min_abs_beta());
  bool bounded = true, overlap = false;
  for (int n = 1; n <= n_max; ++n) {
    DeltaRow row{n, delta_n(ifs, n, exact, cap), 0.0};
    if (row.delta.infinite) {
      row.rate = -std::numeric_limits<double>::infinity();
    } else if (row.delta.zero()) {
      row.rate = std::numeric_limits<double>::infinity();
      overlap = true;
    } else {
      row.rate = -(row.delta.exact ? log_rational(*row.delta.exact) : std::log(row.delta.value)) / n;
    }
    if (row.rate > rep.rate_bound) bounded = false;
    rep.rows.push_back(std::move(row));
  }
  // Overlapping systems have Delta_n <~ N^-n, so their rates exceed the
  // bound above. A rate that stops growing is accepted as well.
  if (!bounded) {
    const double late = rep.rows.back().rate;
    const double mid = rep.rows[static_cast<std::size_t>((n_max + 1) / 2 - 1)].rate;
    bounded = std::isfinite(late) && std::isfinite(mid) && late <= 1.5 * mid;
  }
  if (overlap)
    rep.verdict = HochmanVerdict::ExactOverlap;
  else if (bounded && rep.exact)
    rep.verdict = HochmanVerdict::TrendBounded;
  else
    rep.verdict = HochmanVerdict::Inconclusive;
  return rep;
}

MergedLineIfs merge_duplicates(const LineIfs& ifs, const std::vector<double>& weights) {
  if (weights.size() != ifs.size()) throw Error(ErrorCode::InvalidArgument, "weights do not match the line IFS");
  MergedLineIfs out;
  out.class_of.resize(ifs.size());
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    std::size_t found = reps.size();
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const std::size_t j = reps[r];
      const bool same = ifs.has_exact() ? (*ifs.exact())[i] == (*ifs.exact())[j]
                                        : ifs.maps()[i].beta == ifs.maps()[j].beta &&
                                              ifs.maps()[i].gamma == ifs.maps()[j].gamma;
      if (same) {
        found = r;
        break;
      }
    }
    if (found == reps.size()) {
      reps.push_back(i);
      out.weights.push_back(0.0);
    }
    out.class_of[i] = found;
    out.weights[found] += weights[i];
  }
  if (ifs.has_exact()) {
    std::vector<ExactLineMap> m;
    for (std::size_t j : reps) m.push_back((*ifs.exact())[j]);
    out.ifs = LineIfs(std::move(m));
  } else {
    std::vector<LineMap> m;
    for (std::size_t j : reps) m.push_back(ifs.maps()[j]);
    out.ifs = LineIfs(std::move(m));
  }
  return out;
}

}  // namespace affdim
