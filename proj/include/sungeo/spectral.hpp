#pragma once

// Spectral invariants of a special unitary matrix Q: the sorted principal
// arguments of its eigenvalues, the winding integer
//   zeta(Q) = (1 / 2pi) * sum_j arg(mu_j),
// and the multiplicity s(Q) of the eigenvalue -1.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sungeo/matrix_core.hpp"

namespace sungeo {

/// Principal argument in (-pi, pi]. Negative reals map to exactly +pi.
inline double principal_arg(Complex z) {
  if (z == Complex(0.0, 0.0)) throw Error(ErrorCode::zero_input, "arg of 0 is undefined");
  if (z.imag() == 0.0 && z.real() < 0.0) return kPi;
  const double t = std::arg(z);  // [-pi, pi]; -pi only for imag == -0.0
  return t <= -kPi ? kPi : t;
}

struct SpectralData {
  Eigen::Index n = 0;
  std::vector<double> args;                 // ascending, each in (-pi, pi]
  int zeta = 0;
  int s = 0;                                // multiplicity of -1
  std::vector<std::vector<int>> clusters;   // 0-based indices into args, contiguous
  Matrix basis;                             // column j is an eigenvector for args[j]
  double eig_residual = 0.0;
  double zeta_residual = 0.0;               // |sum(args) / 2pi - zeta| before rounding
};

namespace detail {

inline int floor_half(Eigen::Index n) { return static_cast<int>(n / 2); }

/// Groups sorted equal arguments. Arguments are already snapped, so exact
/// comparison is intended.
inline std::vector<std::vector<int>> clusters_of(const std::vector<double>& args) {
  std::vector<std::vector<int>> out;
  for (int j = 0; j < static_cast<int>(args.size()); ++j) {
    if (out.empty() || args[static_cast<std::size_t>(out.back().front())] != args[static_cast<std::size_t>(j)]) {
      out.push_back({j});
    } else {
      out.back().push_back(j);
    }
  }
  return out;
}

inline double circular_gap(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, kTwoPi - d);
}

}  // namespace detail

/// Eigendecomposes Q and extracts its spectral invariants.
///
/// Eigenvalues within cluster_tol of each other on the circle (single
/// linkage, wrapping across -pi/pi) form a cluster; every member receives the
/// argument of the cluster's circular mean, and a cluster whose mean is within
/// cluster_tol of pi is placed at exactly pi. Equality tests downstream act on
/// these snapped values. Basis column order inside a cluster is whatever the
/// eigensolver produced.
inline SpectralData spectral_summary(const SpecialUnitary& q, const Tolerances& tol) {
  const UnitaryEigenDecomposition eig = unitary_eig(q, tol.eig);
  const auto n = q.order();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) raw[static_cast<std::size_t>(k)] = principal_arg(eig.eigenvalues(k));
  std::sort(order.begin(), order.end(), [&](int a, int b) { return raw[static_cast<std::size_t>(a)] < raw[static_cast<std::size_t>(b)]; });

  // Single-linkage clusters along the sorted angles; the last cluster merges
  // with the first when they touch across the -pi/pi seam.
  std::vector<std::vector<int>> groups;
  for (int idx : order) {
    const double a = raw[static_cast<std::size_t>(idx)];
    if (!groups.empty() && a - raw[static_cast<std::size_t>(groups.back().back())] < tol.cluster) {
      groups.back().push_back(idx);
    } else {
      groups.push_back({idx});
    }
  }
  if (groups.size() > 1) {
    const double first = raw[static_cast<std::size_t>(groups.front().front())];
    const double last = raw[static_cast<std::size_t>(groups.back().back())];
    if (first + kTwoPi - last < tol.cluster) {
      groups.front().insert(groups.front().begin(), groups.back().begin(), groups.back().end());
      groups.pop_back();
    }
  }

  std::vector<double> snapped(static_cast<std::size_t>(n));
  for (const auto& g : groups) {
    Complex mean(0.0, 0.0);
    for (int idx : g) mean += eig.eigenvalues(idx);
    double a = std::abs(mean) > 0.0 ? principal_arg(mean) : raw[static_cast<std::size_t>(g.front())];
    if (detail::circular_gap(a, kPi) < tol.cluster) a = kPi;
    for (int idx : g) snapped[static_cast<std::size_t>(idx)] = a;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return snapped[static_cast<std::size_t>(a)] < snapped[static_cast<std::size_t>(b)]; });

  SpectralData sd;
  sd.n = n;
  sd.args.resize(static_cast<std::size_t>(n));
  sd.basis.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    sd.args[static_cast<std::size_t>(j)] = snapped[static_cast<std::size_t>(src)];
    sd.basis.col(j) = eig.basis.col(src);
  }
  sd.eig_residual = eig.residual;

  const double turns = std::accumulate(sd.args.begin(), sd.args.end(), 0.0) / kTwoPi;
  const double rounded = std::round(turns);
  sd.zeta_residual = std::fabs(turns - rounded);
  if (!(sd.zeta_residual <= tol.zeta)) {
    throw Error(ErrorCode::zeta_not_integer,
                "sum of arguments / 2pi = " + std::to_string(turns), sd.zeta_residual);
  }
  sd.zeta = static_cast<int>(rounded);
  sd.s = static_cast<int>(std::count(sd.args.begin(), sd.args.end(), kPi));
  sd.clusters = detail::clusters_of(sd.args);
  return sd;
}

inline SpectralData spectral_summary(const SpecialUnitary& q) {
  return spectral_summary(q, Tolerances::for_order(q.order()));
}

inline SpectralData spectral_summary(const SpecialUnitary& q, double cluster_tol) {
  Tolerances tol = Tolerances::for_order(q.order());
  tol.cluster = cluster_tol;
  return spectral_summary(q, tol);
}

/// Spectral data of Q*: arguments other than pi change sign, the -1
/// eigenspace stays at pi, and zeta(Q*) = s(Q) - zeta(Q). Eigenvectors are
/// shared with Q; columns are permuted along with the arguments.
inline SpectralData adjoint_spectrum(const SpectralData& sd) {
  const auto n = static_cast<std::size_t>(sd.n);
  std::vector<double> negated(n);
  for (std::size_t j = 0; j < n; ++j) negated[j] = sd.args[j] == kPi ? kPi : -sd.args[j];
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return negated[static_cast<std::size_t>(a)] < negated[static_cast<std::size_t>(b)]; });

  SpectralData out;
  out.n = sd.n;
  out.args.resize(n);
  out.basis.resize(sd.basis.rows(), sd.basis.cols());
  for (std::size_t j = 0; j < n; ++j) {
    const int src = order[j];
    out.args[j] = negated[static_cast<std::size_t>(src)];
    if (sd.basis.size() > 0) out.basis.col(static_cast<Eigen::Index>(j)) = sd.basis.col(src);
  }
  out.zeta = sd.s - sd.zeta;
  out.s = sd.s;
  out.clusters = detail::clusters_of(out.args);
  out.eig_residual = sd.eig_residual;
  out.zeta_residual = sd.zeta_residual;
  return out;
}

/// Sorted arguments in (-pi, pi] summing to 2 pi zeta.
class AdmissibleTuple {
 public:
  /// Sorts the input and checks range and sum (within 1e-9 * n). The last
  /// entry is then adjusted so the stored sum hits 2 pi zeta to rounding.
  static AdmissibleTuple make(std::vector<double> alphas, int zeta) {
    const auto n = static_cast<Eigen::Index>(alphas.size());
    if (n < 1) throw Error(ErrorCode::shape, "empty tuple");
    std::sort(alphas.begin(), alphas.end());
    if (!(alphas.front() > -kPi) || !(alphas.back() <= kPi)) {
      throw Error(ErrorCode::not_admissible, "arguments must lie in (-pi, pi]");
    }
    const int half = detail::floor_half(n);
    if (zeta < -half || zeta > half) {
      throw Error(ErrorCode::not_admissible, "zeta out of [-floor(n/2), floor(n/2)]");
    }
    const double sum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
    const double gap = sum - kTwoPi * zeta;
    if (std::fabs(gap) > 1e-9 * static_cast<double>(n)) {
      throw Error(ErrorCode::not_admissible, "sum of arguments is not 2 pi zeta",
                  std::fabs(gap));
    }
    if (gap != 0.0 && alphas.back() != kPi) {
      const double fixed = alphas.back() - gap;
      if (fixed > -kPi && fixed <= kPi && (n == 1 || fixed >= alphas[alphas.size() - 2])) {
        alphas.back() = fixed;
      }
    }
    return AdmissibleTuple(std::move(alphas), zeta);
  }

  const std::vector<double>& alphas() const noexcept { return alphas_; }
  int zeta() const noexcept { return zeta_; }
  Eigen::Index order() const noexcept { return static_cast<Eigen::Index>(alphas_.size()); }

  /// diag(e^{i alpha_1}, ..., e^{i alpha_n}).
  SpecialUnitary diagonal_matrix() const {
    ComplexVector d(order());
    for (Eigen::Index j = 0; j < order(); ++j) d(j) = std::polar(1.0, alphas_[static_cast<std::size_t>(j)]);
    return validate_special_unitary(Matrix(d.asDiagonal()));
  }

  /// Spectral data read directly off the tuple (identity eigenbasis).
  SpectralData spectral_data() const {
    SpectralData sd;
    sd.n = order();
    sd.args = alphas_;
    sd.zeta = zeta_;
    sd.s = static_cast<int>(std::count(alphas_.begin(), alphas_.end(), kPi));
    sd.clusters = detail::clusters_of(alphas_);
    sd.basis = Matrix::Identity(order(), order());
    return sd;
  }

 private:
  AdmissibleTuple(std::vector<double> a, int z) : alphas_(std::move(a)), zeta_(z) {}
  std::vector<double> alphas_;
  int zeta_;
};

}  // namespace sungeo
