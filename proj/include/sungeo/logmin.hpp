#pragma once

// Minimal-norm su(n) logarithms of a special unitary matrix.
//
// For sorted arguments a_1 <= ... <= a_n of Q and zeta = zeta(Q) >= 0 the
// smallest squared norm of an su(n) logarithm is
//   m(Q) = sum_{j <= n-zeta} a_j^2 + sum_{j > n-zeta} (2pi - a_j)^2,
// attained by shifting the last zeta arguments down by 2pi. When the two
// arguments on either side of that cut coincide (the eigenvalue beta), the
// minimizers form an orbit of U(nu1 + nu2) acting on the beta eigenspace,
// diffeomorphic to Gr(nu2; C^{nu1+nu2}). Negative zeta is handled through
// Q*, using m(Q*) = m(Q) and Theta(Q) = -Theta(Q*).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sungeo/matrix_core.hpp"
#include "sungeo/spectral.hpp"

namespace sungeo {

/// "Gr(k;C^m)".
inline std::string grassmannian_label(int k, int m) {
  return "Gr(" + std::to_string(k) + ";C^" + std::to_string(m) + ")";
}

namespace detail {

inline double sum_of_squares(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

/// Angles theta_j of the canonical minimal logarithm for zeta >= 0: the last
/// zeta sorted arguments are shifted by -2pi.
inline std::vector<double> canonical_angles(const SpectralData& sd) {
  std::vector<double> theta = sd.args;
  const auto n = theta.size();
  const auto z = static_cast<std::size_t>(std::max(sd.zeta, 0));
  for (std::size_t j = n - z; j < n; ++j) theta[j] -= kTwoPi;
  return theta;
}

inline SkewHermitianTraceless log_from_angles(const Matrix& basis,
                                              const std::vector<double>& theta) {
  ComplexVector d(static_cast<Eigen::Index>(theta.size()));
  for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = Complex(0.0, theta[static_cast<std::size_t>(j)]);
  return SkewHermitianTraceless::project(basis * d.asDiagonal() * basis.adjoint());
}

}  // namespace detail

/// m(Q), the squared distance from the identity to Q.
inline double m_value(const SpectralData& sd) {
  if (sd.zeta < 0) return m_value(adjoint_spectrum(sd));
  return detail::sum_of_squares(detail::canonical_angles(sd));
}

// ---------------------------------------------------------------------------
// Brute-force lattice oracle
// ---------------------------------------------------------------------------

struct LatticeMinimum {
  double min = 0.0;
  std::vector<std::vector<int>> minimizers;  // lexicographically sorted
};

/// psi(k) = sum_j (args_j + 2 pi k_j)^2.
inline double lattice_objective(const std::vector<double>& args, const std::vector<int>& k) {
  double acc = 0.0;
  for (std::size_t j = 0; j < args.size(); ++j) {
    const double v = args[j] + kTwoPi * k[j];
    acc += v * v;
  }
  return acc;
}

/// Minimizes psi over every integer tuple in [-K, K]^n with sum(k) = -zeta by
/// exhaustive enumeration, independently of the closed form. Values within
/// 1e-10 * max(1, min) of the minimum count as ties.
inline LatticeMinimum brute_force_m(const std::vector<double>& args, int zeta, int box,
                                    double zeta_tol = 1e-6) {
  const int n = static_cast<int>(args.size());
  if (n < 1) throw Error(ErrorCode::shape, "empty argument tuple");
  if (box < 1) throw Error(ErrorCode::infeasible, "box half-width must be positive");
  double sum = 0.0;
  for (double a : args) sum += a;
  if (std::fabs(sum / kTwoPi - zeta) > zeta_tol) {
    throw Error(ErrorCode::zeta_not_integer, "sum of arguments is not 2 pi zeta");
  }
  if (static_cast<long long>(box) * n < std::llabs(zeta)) {
    throw Error(ErrorCode::infeasible, "no tuple in the box has sum -zeta");
  }

  std::vector<std::pair<double, std::vector<int>>> candidates;
  double best = INFINITY;
  std::vector<int> k(static_cast<std::size_t>(n), -box);
  const int target = -zeta;
  // Odometer over the first n-1 coordinates; the last one is determined.
  while (true) {
    int partial = 0;
    for (int j = 0; j + 1 < n; ++j) partial += k[static_cast<std::size_t>(j)];
    const int last = target - partial;
    if (last >= -box && last <= box) {
      k.back() = last;
      const double v = lattice_objective(args, k);
      if (v <= best * (1.0 + 1e-10) + 1e-10) {
        best = std::min(best, v);
        candidates.emplace_back(v, k);
      }
    }
    int j = n - 2;
    while (j >= 0 && k[static_cast<std::size_t>(j)] == box) {
      k[static_cast<std::size_t>(j)] = -box;
      --j;
    }
    if (j < 0) break;
    ++k[static_cast<std::size_t>(j)];
  }
  if (candidates.empty()) throw Error(ErrorCode::infeasible, "no tuple in the box has sum -zeta");

  LatticeMinimum out;
  out.min = best;
  const double cut = best + 1e-10 * std::max(1.0, best);
  for (auto& [v, tuple] : candidates) {
    if (v <= cut) out.minimizers.push_back(std::move(tuple));
  }
  std::sort(out.minimizers.begin(), out.minimizers.end());
  return out;
}

// ---------------------------------------------------------------------------
// Theta(Q)
// ---------------------------------------------------------------------------

struct ThetaDescriptor {
  Eigen::Index n = 0;
  int zeta = 0;                    // of the oriented spectrum, >= 0
  bool is_singleton = true;
  SkewHermitianTraceless base_log = SkewHermitianTraceless::zero(1);
  std::optional<double> beta_arg;  // arg(mu_{n-zeta}) when zeta >= 1
  std::optional<int> nu1;
  std::optional<int> nu2;
  bool oriented = false;           // computed on Q*; outputs are negated
  double m = 0.0;
  SpectralData spectrum;           // oriented spectrum and its eigenbasis

  /// Gr(nu2; C^{nu1+nu2}), or "point" for a singleton.
  std::string grassmannian() const {
    if (is_singleton) return "point";
    return grassmannian_label(*nu2, *nu1 + *nu2);
  }
  /// Complex dimension nu1 * nu2 of the family (0 for a singleton).
  int complex_dimension() const { return is_singleton ? 0 : (*nu1) * (*nu2); }
};

namespace detail {

/// Builds the descriptor from a spectrum with zeta >= 0. When `negate` is
/// set the spectrum belongs to Q* and every logarithm is mapped back by X -> -X.
inline ThetaDescriptor build_theta(const SpectralData& sd, bool negate) {
  ThetaDescriptor td;
  td.n = sd.n;
  td.zeta = sd.zeta;
  td.oriented = negate;
  td.spectrum = sd;
  const std::vector<double> theta = canonical_angles(sd);
  td.m = sum_of_squares(theta);
  const SkewHermitianTraceless x = log_from_angles(sd.basis, theta);
  td.base_log = negate ? -x : x;

  const int n = static_cast<int>(sd.n);
  const int z = sd.zeta;
  if (z >= 1) {
    // 1-based mu_{n-z} and mu_{n-z+1} are args[n-z-1] and args[n-z].
    const double beta = sd.args[static_cast<std::size_t>(n - z - 1)];
    td.beta_arg = beta;
    if (beta == sd.args[static_cast<std::size_t>(n - z)]) {
      int nu1 = 0;
      while (nu1 < n - z && sd.args[static_cast<std::size_t>(n - z - 1 - nu1)] == beta) ++nu1;
      int nu2 = 0;
      while (nu2 < z && sd.args[static_cast<std::size_t>(n - z + nu2)] == beta) ++nu2;
      td.is_singleton = false;
      td.nu1 = nu1;
      td.nu2 = nu2;
    }
  }
  return td;
}

}  // namespace detail

inline ThetaDescriptor theta_descriptor(const SpectralData& sd) {
  if (sd.zeta < 0) return detail::build_theta(adjoint_spectrum(sd), true);
  return detail::build_theta(sd, false);
}

inline ThetaDescriptor theta_descriptor(const SpecialUnitary& q, const Tolerances& tol) {
  return theta_descriptor(spectral_summary(q, tol));
}

inline ThetaDescriptor theta_descriptor(const SpecialUnitary& q) {
  return theta_descriptor(spectral_summary(q));
}

/// Canonical minimal-norm su(n) logarithm of Q.
inline SkewHermitianTraceless min_log(const SpectralData& sd) {
  return theta_descriptor(sd).base_log;
}

inline SkewHermitianTraceless min_log(const SpecialUnitary& q, const Tolerances& tol) {
  return min_log(spectral_summary(q, tol));
}

inline SkewHermitianTraceless min_log(const SpecialUnitary& q) {
  return min_log(spectral_summary(q));
}

/// The point Ad_R(J) of Theta(Q), where J is the canonical logarithm in the
/// spectral basis and R acts on the beta eigenspace only (identity on the
/// other eigenspaces, which is where the commutant of Q lives).
inline SkewHermitianTraceless theta_sample(const ThetaDescriptor& td, const SpecialUnitary& q,
                                           const Matrix& r, double alg_tol) {
  if (td.is_singleton) throw Error(ErrorCode::singleton_theta, "Theta(Q) is a single point");
  if (q.order() != td.n) throw Error(ErrorCode::shape, "Q does not match the descriptor order");
  const int k = *td.nu1 + *td.nu2;
  if (r.rows() != k || r.cols() != k) {
    throw Error(ErrorCode::shape, "R must have order nu1 + nu2 = " + std::to_string(k));
  }
  const double ur = (r * r.adjoint() - Matrix::Identity(k, k)).norm();
  if (!(ur <= alg_tol)) throw Error(ErrorCode::not_unitary, "R is not unitary", ur);

  // The descriptor must describe this Q (or Q* when oriented).
  const SpectralData& sd = td.spectrum;
  ComplexVector mu(td.n);
  for (Eigen::Index j = 0; j < td.n; ++j) mu(j) = std::polar(1.0, sd.args[static_cast<std::size_t>(j)]);
  const Matrix target = td.oriented ? Matrix(q.matrix().adjoint()) : q.matrix();
  const double mismatch = (sd.basis * mu.asDiagonal() * sd.basis.adjoint() - target).norm();
  const double eig_tol = Tolerances::for_order(td.n).eig;
  if (!(mismatch <= eig_tol)) {
    throw Error(ErrorCode::residual_exceeded, "descriptor does not match Q", mismatch);
  }

  const std::vector<double> theta = detail::canonical_angles(sd);
  const Eigen::Index first = td.n - td.zeta - *td.nu1;
  Matrix embed = Matrix::Identity(td.n, td.n);
  embed.block(first, first, k, k) = r;
  ComplexVector d(td.n);
  for (Eigen::Index j = 0; j < td.n; ++j) d(j) = Complex(0.0, theta[static_cast<std::size_t>(j)]);
  const Matrix basis = sd.basis * embed;
  const SkewHermitianTraceless x =
      SkewHermitianTraceless::project(basis * d.asDiagonal() * basis.adjoint());
  return td.oriented ? -x : x;
}

inline SkewHermitianTraceless theta_sample(const ThetaDescriptor& td, const SpecialUnitary& q,
                                           const Matrix& r) {
  return theta_sample(td, q, r, Tolerances::for_order(td.n).alg);
}

/// Theta sample at a Haar-random R.
template <class Rng>
SkewHermitianTraceless random_theta_sample(const ThetaDescriptor& td, const SpecialUnitary& q,
                                           Rng& rng) {
  if (td.is_singleton) throw Error(ErrorCode::singleton_theta, "Theta(Q) is a single point");
  return theta_sample(td, q, random_unitary(*td.nu1 + *td.nu2, rng));
}

// ---------------------------------------------------------------------------
// Generalized principal logarithms
// ---------------------------------------------------------------------------

/// Structure of the set of su(n) logarithms whose eigenvalues all have
/// imaginary part in [-pi, pi].
struct PlogStatus {
  bool nonempty = false;
  int zeta = 0;
  int s = 0;
  std::optional<int> grassmann_k;  // zeta
  std::optional<int> grassmann_n;  // s
  bool is_singleton = false;

  std::string label() const {
    if (!nonempty) return "empty";
    return grassmannian_label(*grassmann_k, *grassmann_n);
  }
};

inline PlogStatus plog_status(const SpectralData& sd) {
  PlogStatus st;
  st.zeta = sd.zeta;
  st.s = sd.s;
  st.nonempty = sd.zeta >= 0 && sd.zeta <= sd.s;
  if (st.nonempty) {
    st.grassmann_k = sd.zeta;
    st.grassmann_n = sd.s;
    st.is_singleton = sd.zeta == 0 || sd.zeta == sd.s;
  }
  return st;
}

}  // namespace sungeo
