#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "affdim/error.hpp"
#include "affdim/ifs.hpp"

namespace affdim {

Polygon::Polygon(std::vector<std::array<Rational, 2>> v) {
  vertices.reserve(v.size());
  for (const auto& p : v) vertices.push_back({to_double(p[0]), to_double(p[1])});
  exact = std::move(v);
}

Vec2 Polygon::centroid() const {
  Vec2 c{};
  for (const auto& v : vertices) c = c + v;
  return (1.0 / static_cast<double>(vertices.size())) * c;
}

double Polygon::diameter() const {
  double d = 0.0;
  for (const auto& p : vertices)
    for (const auto& q : vertices) d = std::max(d, norm(p - q));
  return d;
}

void Polygon::validate() const {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorCode::NonConvexPolygon, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
    if (exact) {
      const auto& e = *exact;
      const auto& ea = e[i];
      const auto& eb = e[(i + 1) % n];
      const auto& ec = e[(i + 2) % n];
      const Rational turn = (eb[0] - ea[0]) * (ec[1] - eb[1]) - (eb[1] - ea[1]) * (ec[0] - eb[0]);
      if (turn <= 0) throw Error(ErrorCode::NonConvexPolygon, "vertex " + std::to_string(i + 2) + " is not a left turn");
    } else if (!(cross(b - a, c - b) > 0.0)) {
      throw Error(ErrorCode::NonConvexPolygon, "vertex " + std::to_string(i + 2) + " is not a left turn");
    }
  }
}

Polygon unit_square() {
  return Polygon(std::vector<std::array<Rational, 2>>{
      {Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
}

Polygon image(const AffineMap& f, const Polygon& poly) {
  Polygon out;
  out.vertices.reserve(poly.vertices.size());
  for (const auto& v : poly.vertices) out.vertices.push_back(f(v));
  if (f.linear.det() < 0.0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

namespace {

/// Signed distance of p to the boundary of convex ccw poly, positive inside.
double inside_distance(const Polygon& poly, Vec2 p) {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i], b = poly.vertices[(i + 1) % n];
    d = std::min(d, cross(b - a, p - a) / norm(b - a));
  }
  return d;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

/// Separation of a from b along outward normals of a's edges.
double one_sided_gap(const Polygon& a, const Polygon& b) {
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t n = a.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = a.vertices[(i + 1) % n] - a.vertices[i];
    const double len = norm(e);
    if (len == 0.0) continue;
    const Vec2 normal{e.y / len, -e.x / len};  // outward for ccw
    double amax = -std::numeric_limits<double>::infinity();
    for (const auto& v : a.vertices) amax = std::max(amax, dot(normal, v));
    double bmin = std::numeric_limits<double>::infinity();
    for (const auto& v : b.vertices) bmin = std::min(bmin, dot(normal, v));
    best = std::max(best, bmin - amax);
  }
  return best;
}

using ExactPoint = std::array<Rational, 2>;
using ExactPoly = std::vector<ExactPoint>;

ExactPoly exact_image(const ExactAffine& f, const ExactPoly& poly) {
  ExactPoly out;
  out.reserve(poly.size());
  for (const auto& v : poly)
    out.push_back({f.a[0] * v[0] + f.a[1] * v[1] + f.t[0], f.a[2] * v[0] + f.a[3] * v[1] + f.t[1]});
  const Rational det = f.a[0] * f.a[3] - f.a[1] * f.a[2];
  if (det < 0) std::reverse(out.begin(), out.end());
  return out;
}

bool exact_strictly_inside(const ExactPoly& poly, const ExactPoint& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const Rational c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (c <= 0) return false;
  }
  return true;
}

bool exact_separated_along(const ExactPoly& a, const ExactPoly& b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = a[i];
    const auto& q = a[(i + 1) % n];
    const Rational nx = q[1] - p[1];
    const Rational ny = p[0] - q[0];
    Rational amax = nx * a[0][0] + ny * a[0][1];
    for (const auto& v : a) amax = std::max(amax, Rational(nx * v[0] + ny * v[1]));
    Rational bmin = nx * b[0][0] + ny * b[0][1];
    for (const auto& v : b) bmin = std::min(bmin, Rational(nx * v[0] + ny * v[1]));
    if (bmin > amax) return true;
  }
  return false;
}

}  // namespace

double sat_gap(const Polygon& a, const Polygon& b) { return std::max(one_sided_gap(a, b), one_sided_gap(b, a)); }

double polygon_distance(const Polygon& a, const Polygon& b) {
  if (sat_gap(a, b) <= 0.0) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  auto scan = [&d](const Polygon& p, const Polygon& q) {
    const std::size_t m = q.vertices.size();
    for (const auto& v : p.vertices)
      for (std::size_t i = 0; i < m; ++i) d = std::min(d, segment_distance(v, q.vertices[i], q.vertices[(i + 1) % m]));
  };
  scan(a, b);
  scan(b, a);
  return d;
}

SscReport check_ssc(const IfsSystem& sys, const Polygon& o, double tolerance, bool exact) {
  o.validate();
  if (exact && (!sys.has_exact() || !o.exact))
    throw Error(ErrorCode::InvalidArgument, "exact SSC needs rational maps and polygon");

  SscReport rep;
  rep.exact = exact;
  std::vector<Polygon> images;
  images.reserve(sys.size());
  for (const auto& f : sys.maps()) images.push_back(image(f, o));

  rep.margin = std::numeric_limits<double>::infinity();
  std::ostringstream witness;
  bool inside_ok = true;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t k = 0; k < images[i].vertices.size(); ++k) {
      const double d = inside_distance(o, images[i].vertices[k]);
      if (d < rep.margin) rep.margin = d;
      if (!exact && !(d > tolerance) && inside_ok) {
        inside_ok = false;
        witness << "vertex " << k + 1 << " of f_" << i + 1 << "(O) at distance " << d << " from the boundary";
      }
    }
  }

  rep.kappa = std::numeric_limits<double>::infinity();
  bool disjoint_ok = true;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      rep.kappa = std::min(rep.kappa, polygon_distance(images[i], images[j]));
      if (!exact && !(sat_gap(images[i], images[j]) > tolerance) && disjoint_ok) {
        disjoint_ok = false;
        if (inside_ok) witness << "f_" << i + 1 << "(O) and f_" << j + 1 << "(O) are not separated";
      }
    }
  }
  if (images.size() < 2) rep.kappa = std::numeric_limits<double>::infinity();

  if (exact) {
    const ExactPoly& eo = *o.exact;
    std::vector<ExactPoly> eimg;
    for (const auto& f : *sys.exact()) eimg.push_back(exact_image(f, eo));
    for (std::size_t i = 0; i < eimg.size() && inside_ok; ++i)
      for (std::size_t k = 0; k < eimg[i].size(); ++k)
        if (!exact_strictly_inside(eo, eimg[i][k])) {
          inside_ok = false;
          witness << "vertex " << k + 1 << " of f_" << i + 1 << "(O) is not interior";
          break;
        }
    for (std::size_t i = 0; i < eimg.size() && disjoint_ok; ++i)
      for (std::size_t j = i + 1; j < eimg.size(); ++j)
        if (!exact_separated_along(eimg[i], eimg[j]) && !exact_separated_along(eimg[j], eimg[i])) {
          disjoint_ok = false;
          if (inside_ok) witness << "f_" << i + 1 << "(O) and f_" << j + 1 << "(O) intersect";
          break;
        }
  }

  rep.holds = inside_ok && disjoint_ok;
  if (!rep.holds) rep.witness = witness.str();
  return rep;
}

namespace {

struct Cylinder {
  AffineMap map;
  Polygon poly;
  int depth = 0;
  double diameter = 0.0;
};

class PairRefiner {
 public:
  PairRefiner(const IfsSystem& sys, const Polygon& o, int max_depth, double tol, std::size_t budget)
      : sys_(sys), o_(o), max_depth_(max_depth), tol_(tol), budget_(budget) {}

  Cylinder make(const AffineMap& f, int depth) const {
    Cylinder c{f, image(f, o_), depth, 0.0};
    c.diameter = c.poly.diameter();
    return c;
  }

  // false when the pair could not be separated within depth or budget.
  bool separate(const Cylinder& u, const Cylinder& v) {
    if (++tests_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const double gap = sat_gap(u.poly, v.poly);
    if (gap > tol_) {
      min_gap_ = std::min(min_gap_, gap);
      deepest_ = std::max({deepest_, u.depth, v.depth});
      return true;
    }
    const bool u_can = u.depth < max_depth_;
    const bool v_can = v.depth < max_depth_;
    if (!u_can && !v_can) return false;
    const bool split_u = u_can && (!v_can || u.diameter >= v.diameter);
    const Cylinder& parent = split_u ? u : v;
    for (const auto& f : sys_.maps()) {
      Cylinder child = make(compose(parent.map, f), parent.depth + 1);
      if (!(split_u ? separate(child, v) : separate(u, child))) return false;
    }
    return true;
  }

  std::size_t tests() const { return tests_; }
  bool exhausted() const { return exhausted_; }
  double min_gap() const { return min_gap_; }
  int deepest() const { return deepest_; }

 private:
  const IfsSystem& sys_;
  const Polygon& o_;
  int max_depth_;
  double tol_;
  std::size_t budget_;
  std::size_t tests_ = 0;
  bool exhausted_ = false;
  double min_gap_ = std::numeric_limits<double>::infinity();
  int deepest_ = 1;
};

}  // namespace

RefinedSscReport check_ssc_refined(const IfsSystem& sys, const Polygon& o, int max_depth, double tolerance,
                                   std::size_t budget) {
  o.validate();
  RefinedSscReport rep;

  // Closed forward invariance, so that depth-k cylinders cover the attractor.
  rep.forward_invariant = true;
  if (sys.has_exact() && o.exact) {
    for (std::size_t i = 0; i < sys.size() && rep.forward_invariant; ++i) {
      const auto img = exact_image((*sys.exact())[i], *o.exact);
      const auto& eo = *o.exact;
      for (const auto& p : img) {
        for (std::size_t e = 0; e < eo.size(); ++e) {
          const auto& a = eo[e];
          const auto& b = eo[(e + 1) % eo.size()];
          if ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) < 0) {
            rep.forward_invariant = false;
            rep.witness = "f_" + std::to_string(i + 1) + "(O) leaves O";
          }
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < sys.size() && rep.forward_invariant; ++i)
      for (const auto& v : image(sys[i], o).vertices)
        if (inside_distance(o, v) < -1e-12) {
          rep.forward_invariant = false;
          rep.witness = "f_" + std::to_string(i + 1) + "(O) leaves O";
          break;
        }
  }
  if (!rep.forward_invariant) return rep;

  PairRefiner refiner(sys, o, max_depth, tolerance, budget);
  std::vector<Cylinder> first;
  for (const auto& f : sys.maps()) first.push_back(refiner.make(f, 1));
  rep.holds = true;
  for (std::size_t i = 0; i < first.size() && rep.holds; ++i) {
    for (std::size_t j = i + 1; j < first.size(); ++j) {
      if (!refiner.separate(first[i], first[j])) {
        rep.holds = false;
        rep.witness = "pieces " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                      (refiner.exhausted() ? " not separated within the test budget"
                                           : " not separated at depth " + std::to_string(max_depth));
        break;
      }
    }
  }
  rep.pair_tests = refiner.tests();
  rep.depth_used = refiner.deepest();
  rep.kappa_lower = rep.holds ? refiner.min_gap() : 0.0;
  return rep;
}

}  // namespace affdim
