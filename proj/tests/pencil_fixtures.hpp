#pragma once

// Test-only fixtures: explicit Kronecker canonical blocks, planted pencils,
// and a compound-matrix oracle for minimal indices. Everything here is kept
// independent of the staircase implementation it is used to check.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "hypext/pencil.hpp"

namespace fixtures {

struct BlockPair {
  Eigen::MatrixXd a, b;
};

/// (lambda - mu) I + N, Jordan block of size k at the finite eigenvalue mu.
inline BlockPair finite_block(double mu, int k) {
  BlockPair blk;
  blk.a = Eigen::MatrixXd::Identity(k, k);
  blk.b = -mu * Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i + 1 < k; ++i) blk.b(i, i + 1) += 1.0;
  return blk;
}

/// lambda N + I, infinite-eigenvalue block of size k.
inline BlockPair infinite_block(int k) {
  BlockPair blk;
  blk.a = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) blk.a(i, i + 1) = 1.0;
  blk.b = Eigen::MatrixXd::Identity(k, k);
  return blk;
}

/// L_eps right singular block, eps x (eps+1).
inline BlockPair right_singular_block(int eps) {
  BlockPair blk;
  blk.a = Eigen::MatrixXd::Zero(eps, eps + 1);
  blk.b = Eigen::MatrixXd::Zero(eps, eps + 1);
  for (int i = 0; i < eps; ++i) {
    blk.a(i, i) = 1.0;
    blk.b(i, i + 1) = 1.0;
  }
  return blk;
}

/// L_eta^T left singular block, (eta+1) x eta.
inline BlockPair left_singular_block(int eta) {
  BlockPair blk;
  blk.a = Eigen::MatrixXd::Zero(eta + 1, eta);
  blk.b = Eigen::MatrixXd::Zero(eta + 1, eta);
  for (int i = 0; i < eta; ++i) {
    blk.a(i, i) = 1.0;
    blk.b(i + 1, i) = 1.0;
  }
  return blk;
}

inline BlockPair direct_sum(const std::vector<BlockPair>& blocks) {
  int m = 0, n = 0;
  for (const auto& blk : blocks) {
    m += static_cast<int>(blk.a.rows());
    n += static_cast<int>(blk.a.cols());
  }
  BlockPair out;
  out.a = Eigen::MatrixXd::Zero(m, n);
  out.b = Eigen::MatrixXd::Zero(m, n);
  int ro = 0, co = 0;
  for (const auto& blk : blocks) {
    out.a.block(ro, co, blk.a.rows(), blk.a.cols()) = blk.a;
    out.b.block(ro, co, blk.b.rows(), blk.b.cols()) = blk.b;
    ro += static_cast<int>(blk.a.rows());
    co += static_cast<int>(blk.a.cols());
  }
  return out;
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // fix signs so the distribution is Haar-ish and deterministic
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

/// A planted pencil with known invariants, optionally hidden behind a random
/// orthogonal equivalence.
struct PlantedPencil {
  Eigen::MatrixXd a, b;
  hypext::KroneckerInvariants expected;
};

inline PlantedPencil random_planted(std::mt19937& rng, bool disguise = true,
                                    int max_dim = 8, int max_block = 3) {
  static const double eigen_menu[] = {-3.0, -1.5, -1.0, 0.0, 0.75, 2.0, 4.0};
  std::uniform_int_distribution<int> count_dist(0, 2);
  std::uniform_int_distribution<int> size_dist(1, max_block);
  std::uniform_int_distribution<int> idx_dist(0, max_block - 1);
  std::uniform_int_distribution<int> menu_dist(0, 6);

  for (;;) {
    std::vector<BlockPair> blocks;
    hypext::KroneckerInvariants expected;
    const int nf = count_dist(rng) + count_dist(rng); // 0..4, mode around 2
    for (int i = 0; i < nf; ++i) {
      const double mu = eigen_menu[menu_dist(rng)];
      const int k = size_dist(rng);
      blocks.push_back(finite_block(mu, k));
      expected.finite_blocks.push_back({std::complex<double>(mu, 0.0), k});
    }
    const int ni = count_dist(rng);
    for (int i = 0; i < ni; ++i) {
      const int k = size_dist(rng);
      blocks.push_back(infinite_block(k));
      expected.infinite_blocks.push_back(k);
    }
    const int nr = count_dist(rng);
    for (int i = 0; i < nr; ++i) {
      const int eps = idx_dist(rng);
      blocks.push_back(right_singular_block(eps));
      expected.right_minimal_indices.push_back(eps);
    }
    const int nl = count_dist(rng);
    for (int i = 0; i < nl; ++i) {
      const int eta = idx_dist(rng);
      blocks.push_back(left_singular_block(eta));
      expected.left_minimal_indices.push_back(eta);
    }
    if (blocks.empty()) continue;
    BlockPair sum = direct_sum(blocks);
    const int m = static_cast<int>(sum.a.rows());
    const int n = static_cast<int>(sum.a.cols());
    if (m < 1 || n < 1 || m > max_dim || n > max_dim) continue;

    expected.rows = m;
    expected.cols = n;
    std::sort(expected.finite_blocks.begin(), expected.finite_blocks.end(),
              hypext::detail::finite_block_less);
    std::sort(expected.infinite_blocks.begin(), expected.infinite_blocks.end());
    std::sort(expected.right_minimal_indices.begin(), expected.right_minimal_indices.end());
    std::sort(expected.left_minimal_indices.begin(), expected.left_minimal_indices.end());

    PlantedPencil out;
    out.expected = expected;
    if (disguise) {
      Eigen::MatrixXd q = random_orthogonal(m, rng);
      Eigen::MatrixXd z = random_orthogonal(n, rng);
      out.a = q.transpose() * sum.a * z;
      out.b = q.transpose() * sum.b * z;
    } else {
      out.a = sum.a;
      out.b = sum.b;
    }
    return out;
  }
}

/// Independent oracle: right minimal indices from the kernel dimensions of
/// the block-Toeplitz compound matrices S_k (polynomial-solution counting).
inline std::vector<int> toeplitz_right_minimal_indices(const Eigen::MatrixXd& a,
                                                       const Eigen::MatrixXd& b,
                                                       int max_index) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  std::vector<int> out;
  int prev_kernel = 0, prev_count = 0;
  for (int k = 0; k <= max_index; ++k) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero((k + 2) * m, (k + 1) * n);
    for (int j = 0; j <= k; ++j) {
      s.block(j * m, j * n, m, n) = b;
      s.block((j + 1) * m, j * n, m, n) = a;
    }
    const int kernel = (k + 1) * n - hypext::detail::matrix_rank<double>(s, 1e-12);
    const int count_le_k = kernel - prev_kernel; // # of indices <= k
    for (int c = 0; c < count_le_k - prev_count; ++c) out.push_back(k);
    prev_kernel = kernel;
    prev_count = count_le_k;
  }
  return out;
}

inline std::vector<int> toeplitz_left_minimal_indices(const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& b,
                                                      int max_index) {
  return toeplitz_right_minimal_indices(a.transpose(), b.transpose(), max_index);
}

inline bool same_integer_data(const hypext::KroneckerInvariants& x,
                              const hypext::KroneckerInvariants& y, double eig_tol) {
  if (x.infinite_blocks != y.infinite_blocks) return false;
  if (x.right_minimal_indices != y.right_minimal_indices) return false;
  if (x.left_minimal_indices != y.left_minimal_indices) return false;
  if (x.finite_blocks.size() != y.finite_blocks.size()) return false;
  for (std::size_t i = 0; i < x.finite_blocks.size(); ++i) {
    if (x.finite_blocks[i].size != y.finite_blocks[i].size) return false;
    const double d = std::abs(x.finite_blocks[i].eigenvalue - y.finite_blocks[i].eigenvalue);
    if (d > eig_tol * (1.0 + std::abs(y.finite_blocks[i].eigenvalue))) return false;
  }
  return true;
}

} // namespace fixtures
