#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace hypext::detail {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Full SVD that tolerates empty matrices (Eigen's JacobiSVD does not).
template <typename Scalar>
struct FullSvd {
  Mat<Scalar> u; ///< m x m unitary
  Mat<Scalar> v; ///< n x n unitary
  Eigen::VectorXd sigma; ///< min(m, n) singular values, descending
};

template <typename Scalar>
FullSvd<Scalar> full_svd(const Mat<Scalar>& a) {
  FullSvd<Scalar> out;
  const Eigen::Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) {
    out.u = Mat<Scalar>::Identity(m, m);
    out.v = Mat<Scalar>::Identity(n, n);
    out.sigma = Eigen::VectorXd::Zero(std::min(m, n));
    return out;
  }
  Eigen::JacobiSVD<Mat<Scalar>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  return out;
}

inline int rank_from_singular_values(const Eigen::VectorXd& sigma, double threshold) {
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > threshold) ++r;
  return r;
}

/// Smallest multiplicative distance of any singular value to the threshold.
/// A value of 1 means a singular value sits exactly on the threshold.
inline double threshold_margin(const Eigen::VectorXd& sigma, double threshold) {
  double worst = std::numeric_limits<double>::infinity();
  if (threshold <= 0.0) return worst;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma[i];
    if (s <= 0.0) continue;
    const double ratio = s > threshold ? s / threshold : threshold / s;
    worst = std::min(worst, ratio);
  }
  return worst;
}

template <typename Scalar>
double spectral_norm(const Mat<Scalar>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat<Scalar>> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

/// Rank of a matrix with the scaled criterion sigma <= tol * max(m,n) * sigma_max.
template <typename Scalar>
int matrix_rank(const Mat<Scalar>& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat<Scalar>> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double threshold = tol * static_cast<double>(std::max(a.rows(), a.cols())) * sv(0);
  return rank_from_singular_values(sv, threshold);
}

/// Orthonormal basis of the kernel of a (columns), at an absolute threshold.
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, double threshold) {
  auto svd = full_svd<double>(a);
  const int r = rank_from_singular_values(svd.sigma, threshold);
  return svd.v.rightCols(a.cols() - r);
}

/// Extend the columns of basis (assumed independent) to an orthonormal basis
/// of R^n; returns the n x (n - k) complement block.
inline Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& basis) {
  const Eigen::Index n = basis.rows(), k = basis.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - k);
}

/// Parlett-Reinsch style diagonal balancing with powers of two.
/// Returns d with b = D^-1 a D better equilibrated; a is modified in place.
inline Eigen::VectorXd balance_in_place(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  bool converged = false;
  for (int sweep = 0; sweep < 8 && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * s) {
        converged = false;
        d[i] *= f;
        a.col(i) *= f;
        a.row(i) /= f;
      }
    }
  }
  return d;
}

/// 2-norm condition number; infinity when numerically singular.
template <typename Scalar>
double condition_number(const Mat<Scalar>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Mat<Scalar>> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

inline bool approx_zero(double x, double tol) { return std::abs(x) <= tol; }

} // namespace hypext::detail
