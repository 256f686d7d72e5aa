#pragma once

// Dense complex matrices, validated SU(n) / su(n) element types, a unitary
// eigensolver built from Hermitian solves, and the skew-Hermitian exponential.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sungeo/error.hpp"

namespace sungeo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Numerical tolerances. Defaults scale with the matrix order n.
struct Tolerances {
  double group = 1e-8;    // SU(n) membership: ||QQ* - I||_F and |det Q - 1|
  double alg = 1e-8;      // su(n) membership: ||X + X*||_F and |tr X|
  double eig = 1e-7;      // eigendecomposition reconstruction residual
  double cluster = 1e-7;  // eigenvalue clustering on the unit circle
  double zeta = 1e-6;     // distance of sum(args)/2pi from an integer

  static Tolerances for_order(Eigen::Index n) {
    const double s = static_cast<double>(n < 1 ? 1 : n);
    return {1e-8 * s, 1e-8 * s, 1e-7 * s, 1e-7 * s, 1e-6};
  }

  /// Derives the other tolerances from a user-chosen group tolerance, keeping
  /// the default ratios (alg = group, eig = cluster = 10 * group).
  static Tolerances from_group(double group_tol) {
    return {group_tol, group_tol, 10.0 * group_tol, 10.0 * group_tol, 1e-6};
  }
};

// ---------------------------------------------------------------------------
// Elementary arithmetic
// ---------------------------------------------------------------------------

inline void require_square(const Matrix& a) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw Error(ErrorCode::shape, "expected a nonempty square matrix, got " +
                                      std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw Error(ErrorCode::not_finite, "matrix has NaN/Inf entries");
}

inline void require_same_order(const Matrix& a, const Matrix& b) {
  require_square(a);
  require_square(b);
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::shape, "order mismatch: " + std::to_string(a.rows()) +
                                      " vs " + std::to_string(b.rows()));
  }
}

/// Re(tr(A B*)), the real inner product inducing the Frobenius metric.
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_order(a, b);
  // Re(tr(A B*)) = sum_jk Re(a_jk * conj(b_jk))
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      acc += a(i, j).real() * b(i, j).real() + a(i, j).imag() * b(i, j).imag();
    }
  }
  return acc;
}

inline double frobenius_norm(const Matrix& a) { return std::sqrt(frobenius_inner(a, a)); }

/// Determinant by LU with partial pivoting.
inline Complex determinant(const Matrix& a) {
  require_square(a);
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

/// Ad_U(A) = U A U*.
inline Matrix conjugate(const Matrix& u, const Matrix& a) { return u * a * u.adjoint(); }

// ---------------------------------------------------------------------------
// Validated element types
// ---------------------------------------------------------------------------

class SpecialUnitary {
 public:
  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index order() const noexcept { return m_.rows(); }
  double unitarity_residual() const noexcept { return unitarity_residual_; }
  double det_residual() const noexcept { return det_residual_; }

  /// Q*. Residuals carry over: ||Q*Q - I|| = ||QQ* - I|| and |conj(d) - 1| = |d - 1|.
  SpecialUnitary adjoint() const {
    return SpecialUnitary(m_.adjoint(), unitarity_residual_, det_residual_);
  }

  static SpecialUnitary identity(Eigen::Index n) {
    return SpecialUnitary(Matrix::Identity(n, n), 0.0, 0.0);
  }

 private:
  SpecialUnitary(Matrix m, double ur, double dr)
      : m_(std::move(m)), unitarity_residual_(ur), det_residual_(dr) {}

  friend SpecialUnitary validate_special_unitary(const Matrix&, double);

  Matrix m_;
  double unitarity_residual_;
  double det_residual_;
};

inline SpecialUnitary validate_special_unitary(const Matrix& a, double tol) {
  require_square(a);
  const auto n = a.rows();
  const double ur = (a * a.adjoint() - Matrix::Identity(n, n)).norm();
  if (!(ur <= tol)) {
    throw Error(ErrorCode::not_unitary, "||AA* - I||_F = " + std::to_string(ur), ur);
  }
  const double dr = std::abs(determinant(a) - 1.0);
  if (!(dr <= tol)) {
    throw Error(ErrorCode::det_not_one, "|det(A) - 1| = " + std::to_string(dr), dr);
  }
  return SpecialUnitary(a, ur, dr);
}

inline SpecialUnitary validate_special_unitary(const Matrix& a) {
  require_square(a);
  return validate_special_unitary(a, Tolerances::for_order(a.rows()).group);
}

/// P Q, revalidated.
inline SpecialUnitary compose(const SpecialUnitary& p, const SpecialUnitary& q) {
  require_same_order(p.matrix(), q.matrix());
  return validate_special_unitary(p.matrix() * q.matrix());
}

/// An element of su(n): skew-Hermitian and traceless.
class SkewHermitianTraceless {
 public:
  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index order() const noexcept { return m_.rows(); }

  SkewHermitianTraceless operator-() const { return SkewHermitianTraceless(-m_); }
  SkewHermitianTraceless scaled(double t) const { return SkewHermitianTraceless(t * m_); }

  static SkewHermitianTraceless zero(Eigen::Index n) {
    return SkewHermitianTraceless(Matrix::Zero(n, n));
  }

  /// Projects an (almost) skew-Hermitian matrix onto su(n) without checking.
  /// Internal constructions use this after building X from a unitary basis.
  static SkewHermitianTraceless project(const Matrix& a) {
    Matrix x = 0.5 * (a - a.adjoint());
    const Complex shift = x.trace() / static_cast<double>(x.rows());
    x.diagonal().array() -= shift;
    return SkewHermitianTraceless(std::move(x));
  }

 private:
  explicit SkewHermitianTraceless(Matrix m) : m_(std::move(m)) {}
  friend SkewHermitianTraceless validate_skew(const Matrix&, double);

  Matrix m_;
};

/// Skew-Hermitian matrices have purely imaginary spectra, so the two checks
/// below cover the eigenvalue condition as well.
inline SkewHermitianTraceless validate_skew(const Matrix& a, double tol) {
  require_square(a);
  const double herm = (a + a.adjoint()).norm();
  if (!(herm <= tol)) {
    throw Error(ErrorCode::not_skew, "||X + X*||_F = " + std::to_string(herm), herm);
  }
  const double tr = std::abs(a.trace());
  if (!(tr <= tol)) throw Error(ErrorCode::not_skew, "|tr X| = " + std::to_string(tr), tr);
  return SkewHermitianTraceless(a);
}

inline SkewHermitianTraceless validate_skew(const Matrix& a) {
  require_square(a);
  return validate_skew(a, Tolerances::for_order(a.rows()).alg);
}

// ---------------------------------------------------------------------------
// Eigensolvers
// ---------------------------------------------------------------------------

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;
};

inline HermitianEigen hermitian_eig(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::eig_failed, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct UnitaryEigenDecomposition {
  ComplexVector eigenvalues;  // unit modulus
  Matrix basis;               // Q = basis * diag(eigenvalues) * basis*
  double residual = 0.0;      // ||basis * diag * basis* - Q||_F
};

namespace detail {

/// One rotation of the complex Jacobi method for normal matrices: a unitary
/// G acting on coordinates (p, q) that triangularizes the 2x2 principal
/// block of T. For a normal block both off-diagonal entries vanish.
inline void jacobi_normal_rotate(Matrix& t, Matrix& u, Eigen::Index p, Eigen::Index q) {
  const Complex a = t(p, p), b = t(p, q), c = t(q, p), d = t(q, q);
  if (std::norm(b) + std::norm(c) == 0.0) return;
  const Complex half = 0.5 * (a - d);
  Complex disc = std::sqrt(half * half + b * c);
  if ((std::conj(half) * disc).real() < 0.0) disc = -disc;
  // Eigenvector for the eigenvalue closest to a.
  Complex v0 = half + disc, v1 = c;
  double nv = std::sqrt(std::norm(v0) + std::norm(v1));
  if (nv < 1e-300) {
    v0 = b;
    v1 = disc - half;
    nv = std::sqrt(std::norm(v0) + std::norm(v1));
    if (nv < 1e-300) return;
  }
  v0 /= nv;
  v1 /= nv;
  // G = [[v0, -conj(v1)], [v1, conj(v0)]]
  const Complex g00 = v0, g01 = -std::conj(v1), g10 = v1, g11 = std::conj(v0);
  for (Eigen::Index k = 0; k < t.rows(); ++k) {  // T <- T G
    const Complex tp = t(k, p), tq = t(k, q);
    t(k, p) = tp * g00 + tq * g10;
    t(k, q) = tp * g01 + tq * g11;
    const Complex up = u(k, p), uq = u(k, q);
    u(k, p) = up * g00 + uq * g10;
    u(k, q) = up * g01 + uq * g11;
  }
  for (Eigen::Index k = 0; k < t.cols(); ++k) {  // T <- G* T
    const Complex tp = t(p, k), tq = t(q, k);
    t(p, k) = std::conj(g00) * tp + std::conj(g10) * tq;
    t(q, k) = std::conj(g01) * tp + std::conj(g11) * tq;
  }
}

inline double off_diagonal_norm(const Matrix& t) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != j) acc += std::norm(t(i, j));
    }
  }
  return std::sqrt(acc);
}

}  // namespace detail

/// Eigendecomposition of a special unitary matrix using Hermitian solves only
/// for the bulk of the work:
///  1. diagonalize Q + Q* (eigenvalues 2cos(theta));
///  2. inside each cluster of equal cosines diagonalize (Q - Q*)/2i, which
///     separates conjugate pairs e^{+-i theta};
///  3. sweep the remaining off-diagonal mass of U*QU with normal-matrix Jacobi
///     rotations. Step 3 matters for clusters near +-1 where cos is flat and
///     step 1 cannot resolve the eigenspaces to full precision.
inline UnitaryEigenDecomposition unitary_eig(const SpecialUnitary& q, double eig_tol) {
  const Matrix& a = q.matrix();
  const auto n = a.rows();
  const Matrix cos_part = a + a.adjoint();
  const Matrix sin_part = (a - a.adjoint()) / Complex(0.0, 1.0);

  const HermitianEigen outer = hermitian_eig(cos_part);
  Matrix u = outer.vectors;

  constexpr double kGroupGap = 1e-6;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && outer.values(stop) - outer.values(stop - 1) <= kGroupGap) ++stop;
    const Eigen::Index len = stop - start;
    if (len > 1) {
      const Matrix vg = u.middleCols(start, len);
      const HermitianEigen inner = hermitian_eig(vg.adjoint() * sin_part * vg);
      u.middleCols(start, len) = vg * inner.vectors;
    }
    start = stop;
  }

  Matrix t = u.adjoint() * a * u;
  const double scale = std::max(1.0, t.norm());
  constexpr int kMaxSweeps = 30;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(t) <= 1e-15 * scale) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) detail::jacobi_normal_rotate(t, u, p, r);
    }
  }
  if (sweep == kMaxSweeps && detail::off_diagonal_norm(t) > 1e-10 * scale) {
    throw Error(ErrorCode::eig_failed, "normal Jacobi sweeps did not converge");
  }

  UnitaryEigenDecomposition out;
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex mu = t(k, k);
    const double r = std::abs(mu);
    if (r == 0.0) throw Error(ErrorCode::eig_failed, "zero eigenvalue of a unitary matrix");
    out.eigenvalues(k) = mu / r;
  }
  out.residual = (u * out.eigenvalues.asDiagonal() * u.adjoint() - a).norm();
  out.basis = std::move(u);
  if (!(out.residual <= eig_tol)) {
    throw Error(ErrorCode::residual_exceeded,
                "eigendecomposition residual " + std::to_string(out.residual), out.residual);
  }
  return out;
}

inline UnitaryEigenDecomposition unitary_eig(const SpecialUnitary& q) {
  return unitary_eig(q, Tolerances::for_order(q.order()).eig);
}

/// exp(X) via the Hermitian eigendecomposition of -iX:
/// exp(X) = V diag(e^{i theta_j}) V*.
inline SpecialUnitary expm_skew(const SkewHermitianTraceless& x, double group_tol) {
  const HermitianEigen he = hermitian_eig(Complex(0.0, -1.0) * x.matrix());
  ComplexVector phases(he.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, he.values(k));
  return validate_special_unitary(he.vectors * phases.asDiagonal() * he.vectors.adjoint(),
                                  group_tol);
}

inline SpecialUnitary expm_skew(const SkewHermitianTraceless& x) {
  return expm_skew(x, Tolerances::for_order(x.order()).group);
}

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

/// Haar-distributed unitary: QR of a complex Ginibre matrix, with each column
/// of Q rotated by the phase of the matching diagonal entry of R so that the
/// factorization is unique (R with positive diagonal).
template <class Rng>
Matrix random_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0.0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

/// Haar-distributed element of SU(n). The first column of a Haar unitary is
/// multiplied by det^{-1}; the SU(n) factor of U(n) = SU(n) x U(1) keeps its
/// Haar law under this map.
template <class Rng>
SpecialUnitary random_special_unitary(Eigen::Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::shape, "order must be positive");
  Matrix u = random_unitary(n, rng);
  const Complex d = determinant(u);
  u.col(0) *= std::conj(d) / std::abs(d);
  return validate_special_unitary(u);
}

inline SpecialUnitary random_special_unitary(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::shape, "order must be positive");
  if (n == 1) return SpecialUnitary::identity(1);
  std::mt19937_64 rng(seed);
  return random_special_unitary(n, rng);
}

}  // namespace sungeo
