#pragma once

// Riemannian geometry of SU(n) under the bi-invariant Frobenius metric
// <A, B> = Re tr(A B*). Geodesics through P are t -> P exp(tX), X in su(n),
// and d(P, Q) is the norm of a minimal logarithm of P*Q.

#include <cmath>
#include <vector>

#include "sungeo/logmin.hpp"
#include "sungeo/matrix_core.hpp"
#include "sungeo/spectral.hpp"

namespace sungeo {

struct GeodesicSegment {
  SpecialUnitary start;
  SkewHermitianTraceless velocity;
  double length = 0.0;
};

inline GeodesicSegment make_segment(const SpecialUnitary& p, const SkewHermitianTraceless& x) {
  require_same_order(p.matrix(), x.matrix());
  return {p, x, frobenius_norm(x.matrix())};
}

/// t -> P exp(tX); defined for every real t.
inline SpecialUnitary geodesic_eval(const GeodesicSegment& seg, double t) {
  const SpecialUnitary step = expm_skew(seg.velocity.scaled(t));
  return validate_special_unitary(seg.start.matrix() * step.matrix());
}

struct GeodesicFamily {
  SpecialUnitary p;
  SpecialUnitary q;
  bool unique = true;
  GeodesicSegment canonical;
  ThetaDescriptor theta;  // of P*Q, oriented as described on relative_theta
  double distance = 0.0;
  SpectralData spectrum;  // of P*Q, unoriented
};

namespace detail {

/// Theta descriptor of P*Q. Of the two equivalent descriptions (P*Q, or its
/// adjoint with logs negated) the one with the larger zeta is used; ties go
/// to P*Q.
inline ThetaDescriptor relative_theta(const SpectralData& sd) {
  if (sd.zeta < sd.s - sd.zeta) return build_theta(adjoint_spectrum(sd), true);
  return build_theta(sd, false);
}

inline SpectralData relative_spectrum(const SpecialUnitary& p, const SpecialUnitary& q,
                                      const Tolerances& tol) {
  require_same_order(p.matrix(), q.matrix());
  const SpecialUnitary rel = validate_special_unitary(p.matrix().adjoint() * q.matrix(),
                                                      tol.group);
  return spectral_summary(rel, tol);
}

}  // namespace detail

inline double distance(const SpecialUnitary& p, const SpecialUnitary& q, const Tolerances& tol) {
  return std::sqrt(detail::relative_theta(detail::relative_spectrum(p, q, tol)).m);
}

inline double distance(const SpecialUnitary& p, const SpecialUnitary& q) {
  return distance(p, q, Tolerances::for_order(p.order()));
}

/// Canonical X with P exp(X) = Q and ||X|| = d(P, Q).
inline SkewHermitianTraceless log_map(const SpecialUnitary& p, const SpecialUnitary& q,
                                      const Tolerances& tol) {
  return detail::relative_theta(detail::relative_spectrum(p, q, tol)).base_log;
}

inline SkewHermitianTraceless log_map(const SpecialUnitary& p, const SpecialUnitary& q) {
  return log_map(p, q, Tolerances::for_order(p.order()));
}

/// All minimizing geodesic segments from P to Q. The minimizer is unique iff
/// zeta = 0 or the eigenvalues on both sides of the 2pi shift differ;
/// otherwise the family is Gr(nu2; C^{nu1+nu2}).
inline GeodesicFamily geodesic_family(const SpecialUnitary& p, const SpecialUnitary& q,
                                      const Tolerances& tol) {
  SpectralData sd = detail::relative_spectrum(p, q, tol);
  ThetaDescriptor td = detail::relative_theta(sd);
  GeodesicSegment seg = make_segment(p, td.base_log);
  const double d = std::sqrt(td.m);
  const bool unique = td.is_singleton;
  return {p, q, unique, std::move(seg), std::move(td), d, std::move(sd)};
}

inline GeodesicFamily geodesic_family(const SpecialUnitary& p, const SpecialUnitary& q) {
  return geodesic_family(p, q, Tolerances::for_order(p.order()));
}

/// Velocity of another minimizing segment of the family, picked by a unitary
/// R of order nu1 + nu2 acting on the degenerate eigenspace of P*Q.
inline SkewHermitianTraceless family_velocity(const GeodesicFamily& fam, const Matrix& r) {
  const SpecialUnitary rel = validate_special_unitary(fam.p.matrix().adjoint() * fam.q.matrix());
  return theta_sample(fam.theta, rel, r);
}

/// Diameter of SU(n): pi sqrt(n) for even n, pi sqrt(n - 1/n) for odd n.
inline double diameter(int n) {
  if (n < 2) throw Error(ErrorCode::unsupported_n, "diameter needs n >= 2");
  const double nn = static_cast<double>(n);
  return n % 2 == 0 ? kPi * std::sqrt(nn) : kPi * std::sqrt(nn - 1.0 / nn);
}

struct DiametralReport {
  int n = 0;
  double diameter = 0.0;
  std::vector<SpecialUnitary> points;
};

/// Points at maximal distance from P: -P for even n, e^{+-(n-1) pi i / n} P
/// for odd n.
inline DiametralReport diametral_points(const SpecialUnitary& p) {
  const int n = static_cast<int>(p.order());
  DiametralReport rep;
  rep.n = n;
  rep.diameter = diameter(n);
  if (n % 2 == 0) {
    rep.points.push_back(validate_special_unitary(-p.matrix()));
  } else {
    const double phase = (n - 1) * kPi / n;
    rep.points.push_back(validate_special_unitary(std::polar(1.0, phase) * p.matrix()));
    rep.points.push_back(validate_special_unitary(std::polar(1.0, -phase) * p.matrix()));
  }
  return rep;
}

}  // namespace sungeo
