#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hypext/errors.hpp"
#include "hypext/linalg.hpp"
#include "hypext/pencil.hpp"
#include "hypext/system.hpp"

namespace hypext {

namespace detail {

inline void require_admissible_direction(const SystemDefinition& sys, const Frame& frame,
                                         const Eigen::VectorXd& k) {
  if (k.size() != sys.n_dim)
    throw DimensionMismatch("direction: covector has wrong length");
  const double knorm = k.norm();
  if (knorm < 1e-14) throw DegenerateDirection("direction: k must be nonzero");
  if (std::abs(k.dot(frame.t_vec)) > 1e-9 * knorm * frame.t_vec.norm())
    throw DegenerateDirection("direction: k is not in the frame's spatial span");
  const double cosang = std::abs(k.dot(frame.n_cov)) / (knorm * frame.n_cov.norm());
  if (cosang > 1.0 - 1e-12 || std::acos(std::min(1.0, cosang)) < 1e-6)
    throw DegenerateDirection("direction: k is within angle 1e-6 of the time covector");
}

} // namespace detail

/// Structure counts (d, r, s) of the constraint/evolution split at a spatial
/// direction k: the |Gamma| x |alpha| matrix (C.n)(N.k) has right kernel of
/// dimension d, rank r and left kernel of dimension s.
struct StructureCounts {
  int d = 0, r = 0, s = 0;
  Eigen::VectorXd k;
};

inline StructureCounts structure_counts(const SystemDefinition& sys, const Frame& frame,
                                        const Eigen::VectorXd& k, double tol = 1e-10) {
  detail::require_admissible_direction(sys, frame, k);
  const Eigen::MatrixXd m = constraint_at(sys, frame.n_cov) * symbol_at(sys, k);
  const int rank = detail::matrix_rank<double>(m, tol);
  StructureCounts out;
  out.d = sys.num_vars - rank;
  out.r = rank;
  out.s = sys.num_constraints - rank;
  out.k = k;
  return out;
}

/// Per-direction record of the symbol pencil's structure.
struct DirectionRecord {
  Eigen::VectorXd k;
  std::vector<EigenvalueMultiplicity> eigenvalues;
  KroneckerInvariants invariants;
  bool all_real = true;
  bool all_simple = true;         ///< every finite block has size 1
  bool has_right_minimal = false; ///< gauge freedom
  bool left_indices_ok = true;    ///< left minimal indices all in {0, 1}
  bool marginal = false;
};

struct Condition1Report {
  int rank_time_symbol = 0;
  int num_vars = 0;
  std::vector<DirectionRecord> directions;
  std::vector<int> failing_directions; ///< indices into `directions`
  bool semisimple_real = false; ///< real, size-1 finite blocks everywhere
  bool gauge_freedom = false;
  bool structure_ok = false;    ///< semisimple_real and Kronecker shape as in Conditions 1-2
  bool any_marginal = false;
};

/// Check Condition 1 over sampled spatial directions: rank(N.n) must be
/// maximal, and the pencil (N.n, N.k) must have only real, size-1 finite
/// blocks. Passing certifies the generalized Kreiss condition at the sampled
/// resolution.
inline Condition1Report check_condition1(const SystemDefinition& sys, const Frame& frame,
                                         int samples = 200, double tol = 1e-10,
                                         unsigned seed = 0) {
  if (samples < 1) throw std::invalid_argument("check_condition1: samples must be >= 1");
  Condition1Report report;
  report.num_vars = sys.num_vars;
  const Eigen::MatrixXd an = symbol_at(sys, frame.n_cov);
  report.rank_time_symbol = detail::matrix_rank<double>(an, tol);
  if (report.rank_time_symbol < sys.num_vars)
    throw RankDeficientTimeDirection(
        "condition 1: rank(N.n) = " + std::to_string(report.rank_time_symbol) +
        " < " + std::to_string(sys.num_vars));

  const auto dirs = sample_directions(frame, samples, seed);
  report.semisimple_real = true;
  report.structure_ok = true;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    DirectionRecord rec;
    rec.k = dirs[i];
    MatrixPencil pencil(an, symbol_at(sys, dirs[i]));
    auto [inv, tf] = staircase_decompose(pencil, tol);
    rec.invariants = inv;
    rec.marginal = tf.rank_decisions_marginal;
    for (const auto& blk : inv.finite_blocks) {
      if (blk.eigenvalue.imag() != 0.0) rec.all_real = false;
      if (blk.size != 1) rec.all_simple = false;
    }
    rec.has_right_minimal = !inv.right_minimal_indices.empty();
    for (int e : inv.left_minimal_indices)
      if (e > 1) rec.left_indices_ok = false;
    // group blocks into the eigenvalue table
    for (const auto& blk : inv.finite_blocks) {
      if (!rec.eigenvalues.empty() && rec.eigenvalues.back().value == blk.eigenvalue) {
        rec.eigenvalues.back().algebraic += blk.size;
        rec.eigenvalues.back().geometric += 1;
      } else {
        rec.eigenvalues.push_back({blk.eigenvalue, blk.size, 1});
      }
    }
    const bool cond1_ok = rec.all_real && rec.all_simple && !rec.has_right_minimal;
    if (!cond1_ok) {
      report.semisimple_real = false;
      report.failing_directions.push_back(static_cast<int>(i));
    }
    if (rec.has_right_minimal) report.gauge_freedom = true;
    if (!cond1_ok || !rec.left_indices_ok || !inv.infinite_blocks.empty())
      report.structure_ok = false;
    if (rec.marginal) report.any_marginal = true;
    report.directions.push_back(std::move(rec));
  }
  return report;
}

struct Condition2Report {
  bool pass = false;
  double max_sym_residual = 0.0;
  int rank_cn = 0;
  int expected_rank = 0;
  std::string detail;
};

/// Check Condition 2: (i) the symmetrized contraction C^{Gamma(a}_A N^{b)A}
/// vanishes entrywise up to tol, (ii) rank(C.n) = |Gamma| = |A| - |alpha|.
/// Throws Condition2Violation when either part fails.
inline Condition2Report verify_condition2(const SystemDefinition& sys, const Frame& frame,
                                          double tol = 1e-12) {
  Condition2Report report;
  report.expected_rank = sys.num_constraints;
  for (int a = 0; a < sys.n_dim; ++a)
    for (int b = a; b < sys.n_dim; ++b) {
      Eigen::MatrixXd sym =
          sys.constraint_proj[a] * sys.symbol[b] + sys.constraint_proj[b] * sys.symbol[a];
      for (int g = 0; g < sym.rows(); ++g)
        for (int v = 0; v < sym.cols(); ++v) {
          const double entry = std::abs(sym(g, v));
          if (entry > report.max_sym_residual) report.max_sym_residual = entry;
          if (entry > tol)
            throw Condition2Violation(
                "condition 2: symmetrized entry (Gamma=" + std::to_string(g) +
                ", a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                ", alpha=" + std::to_string(v) + ") = " + std::to_string(entry) +
                " exceeds tolerance");
        }
    }
  report.rank_cn = detail::matrix_rank<double>(constraint_at(sys, frame.n_cov), 1e-10);
  if (report.rank_cn != report.expected_rank)
    throw Condition2Violation("condition 2: rank(C.n) = " + std::to_string(report.rank_cn) +
                              " but |Gamma| = " + std::to_string(report.expected_rank));
  report.pass = true;
  report.detail = "symmetrized identity and rank check hold";
  return report;
}

namespace detail {

/// Eigen-structure of the symbol pencil at a direction, arranged as the
/// staircase-adapted bases used by reductions and canonical extensions:
/// variable space splits into physical kernel directions and a complement,
/// equation space into their A/B images plus the left-kernel remainder.
struct PencilAdaptedBasis {
  std::vector<double> phys_eigenvalues; ///< lambda_i, one per column of x_phys
  Eigen::MatrixXd x_phys;  ///< |alpha| x d
  Eigen::MatrixXd x_extra; ///< |alpha| x r orthonormal complement
  Eigen::MatrixXd w_phys;  ///< A x_phys
  Eigen::MatrixXd w_a;     ///< A x_extra
  Eigen::MatrixXd w_b;     ///< B x_extra
  Eigen::MatrixXd y_left;  ///< |A| x s complement of [w_phys w_a w_b]
};

inline PencilAdaptedBasis pencil_adapted_basis(const SystemDefinition& sys,
                                               const Frame& frame, const Eigen::VectorXd& k,
                                               double tol = 1e-10) {
  require_admissible_direction(sys, frame, k);
  const Eigen::MatrixXd a = symbol_at(sys, frame.n_cov);
  const Eigen::MatrixXd b = symbol_at(sys, k);
  MatrixPencil pencil(a, b);
  auto eigs = finite_eigenvalues(pencil, tol);
  for (const auto& e : eigs) {
    if (e.value.imag() != 0.0)
      throw Error("pencil basis: non-real characteristic speeds at this direction");
    if (e.algebraic != e.geometric)
      throw Error("pencil basis: defective finite block at this direction");
  }

  PencilAdaptedBasis out;
  const double scale = std::max(spectral_norm<double>(a), spectral_norm<double>(b));
  const double threshold =
      tol * static_cast<double>(std::max(a.rows(), a.cols())) * std::max(scale, 1e-300);
  std::vector<Eigen::VectorXd> cols;
  for (const auto& e : eigs) {
    Eigen::MatrixXd ker = kernel_basis(evaluate(pencil, e.value.real()), threshold);
    if (ker.cols() != e.geometric)
      throw Error("pencil basis: kernel dimension disagrees with multiplicity");
    for (int c = 0; c < ker.cols(); ++c) {
      cols.push_back(ker.col(c));
      out.phys_eigenvalues.push_back(e.value.real());
    }
  }
  const int d = static_cast<int>(cols.size());
  out.x_phys.resize(sys.num_vars, d);
  for (int c = 0; c < d; ++c) out.x_phys.col(c) = cols[c];
  out.x_extra = orthonormal_complement(out.x_phys);
  out.w_phys = a * out.x_phys;
  out.w_a = a * out.x_extra;
  out.w_b = b * out.x_extra;
  Eigen::MatrixXd span(sys.num_eqs, d + 2 * out.x_extra.cols());
  span << out.w_phys, out.w_a, out.w_b;
  out.y_left = orthonormal_complement(span);
  return out;
}

} // namespace detail

/// Build a reduction h (|alpha| x |A|) at direction k: h * (N.l(lambda)) is a
/// square pencil whose eigenvalues are the physical speeds {lambda_i} plus
/// the prescribed constraint-mode speeds {pi_j}. The construction lives in
/// the pencil-adapted basis at this k and is direction-dependent
/// (pseudodifferential) in general.
inline Eigen::MatrixXd build_reduction(const SystemDefinition& sys, const Frame& frame,
                                       const Eigen::VectorXd& k,
                                       const std::vector<double>& speeds,
                                       double tol = 1e-10) {
  auto basis = detail::pencil_adapted_basis(sys, frame, k, tol);
  const int d = static_cast<int>(basis.x_phys.cols());
  const int r = static_cast<int>(basis.x_extra.cols());
  const int s = static_cast<int>(basis.y_left.cols());
  if (static_cast<int>(speeds.size()) != r)
    throw DimensionMismatch("build_reduction: expected " + std::to_string(r) +
                            " constraint speeds, got " + std::to_string(speeds.size()));

  // h maps A x_i -> x_i, A x_c -> x_c, (B + pi A) x_c -> 0, y_left -> 0,
  // which realizes the diagonal reduced pencil diag(lambda - lambda_i,
  // lambda - pi_j) in the adapted basis.
  Eigen::MatrixXd u(sys.num_eqs, sys.num_eqs);
  Eigen::MatrixXd wb_shift = basis.w_b;
  for (int j = 0; j < r; ++j) wb_shift.col(j) += speeds[j] * basis.w_a.col(j);
  u << basis.w_phys, basis.w_a, wb_shift, basis.y_left;
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(sys.num_vars, sys.num_eqs);
  target.block(0, 0, sys.num_vars, d) = basis.x_phys;
  target.block(0, d, sys.num_vars, r) = basis.x_extra;
  // remaining d+... columns of target stay zero (r shifted + s left-kernel)
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(u);
  if (!u.allFinite() || std::abs(lu.determinant()) < 1e-300)
    throw Error("build_reduction: adapted basis is numerically singular");
  (void)s;
  return target * lu.inverse();
}

} // namespace hypext
