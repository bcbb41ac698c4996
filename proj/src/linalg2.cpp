#include "affdim/linalg2.hpp"

#include "affdim/error.hpp"

namespace affdim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::BadSymbol: return "BadSymbol";
    case ErrorCode::NonConvexPolygon: return "NonConvexPolygon";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotTriangular: return "NotTriangular";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::PrefixTooShort: return "PrefixTooShort";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoDomination: return "NoDomination";
    case ErrorCode::BadExponents: return "BadExponents";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (std::abs(d) < kSingularFloor) throw Error(ErrorCode::SingularMatrix, "matrix not invertible");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double operator_norm(const Mat2& m) {
  const double t = m.frob2();
  const double d = m.det();
  const double disc = std::max(0.0, t * t - 4.0 * d * d);
  return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

SingularPair singular_values(const Mat2& m) {
  const double d = std::abs(m.det());
  if (d < kSingularFloor) throw Error(ErrorCode::SingularMatrix, "singular values of a singular matrix");
  // alpha2 from the determinant rather than the minus-root: no cancellation.
  const double a1 = operator_norm(m);
  return {a1, d / a1};
}

double phi_s(const SingularPair& sv, double s) {
  if (s < 0.0) throw Error(ErrorCode::NegativeExponent, "phi_s needs s >= 0");
  if (s <= 1.0) return std::pow(sv.alpha1, s);
  if (s <= 2.0) return sv.alpha1 * std::pow(sv.alpha2, s - 1.0);
  return std::pow(sv.alpha1 * sv.alpha2, 0.5 * s);
}

double phi_s(const Mat2& m, double s) {
  if (s < 0.0) throw Error(ErrorCode::NegativeExponent, "phi_s needs s >= 0");
  return phi_s(singular_values(m), s);
}

double proj_metric(ProjPoint p, ProjPoint q) { return std::abs(std::sin(p.theta() - q.theta())); }

double ccw_offset(ProjPoint from, ProjPoint to) { return ProjPoint::canonical(to.theta() - from.theta()); }

ProjPoint proj_act(const Mat2& m, ProjPoint p) {
  if (std::abs(m.det()) < kSingularFloor) throw Error(ErrorCode::SingularMatrix, "projective action");
  return ProjPoint::from_vector(m * p.unit());
}

ProjArc::ProjArc(ProjPoint start, ProjPoint end) : start_(start), length_(ccw_offset(start, end)) {
  if (length_ <= 0.0) throw Error(ErrorCode::InvalidArgument, "arc endpoints coincide");
}

ProjArc ProjArc::centered(ProjPoint mid, double half_width) {
  if (!(half_width > 0.0) || half_width >= 0.5 * kPi)
    throw Error(ErrorCode::InvalidArgument, "arc half width must lie in (0, pi/2)");
  ProjArc arc;
  arc.start_ = ProjPoint(mid.theta() - half_width);
  arc.length_ = 2.0 * half_width;
  return arc;
}

bool ProjArc::contains(ProjPoint p, double slack) const {
  if (length_ + 2.0 * slack >= kPi) return true;
  return ccw_offset(ProjPoint(start_.theta() - slack), p) <= length_ + 2.0 * slack;
}

double ProjArc::clearance(const ProjArc& inner) const {
  const double lead = ccw_offset(start_, inner.start_);
  const double tail = length_ - lead - inner.length_;
  if (tail >= 0.0) return std::min(lead, tail);
  // Sticks out: either starts just before start_ (lead wraps near pi) or
  // overruns end(); report the smaller violation as a negative number.
  return -std::min(kPi - lead, -tail);
}

bool ProjArc::overlaps(const ProjArc& other) const {
  return contains(other.start_) || other.contains(start_);
}

ProjArc ProjArc::inflated(double eps) const {
  ProjArc arc;
  arc.start_ = ProjPoint(start_.theta() - eps);
  arc.length_ = length_ + 2.0 * eps;
  if (arc.length_ >= kPi || arc.length_ <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "inflated arc leaves (0, pi)");
  return arc;
}

ProjArc arc_image(const Mat2& m, const ProjArc& arc) {
  const ProjPoint s = proj_act(m, arc.start());
  const ProjPoint e = proj_act(m, arc.end());
  const ProjPoint mid = proj_act(m, arc.midpoint());
  ProjArc forward(s, e);
  if (forward.contains(mid)) return forward;
  return ProjArc(e, s);
}

}  // namespace affdim
