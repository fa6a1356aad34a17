#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypext/analysis.hpp"
#include "hypext/errors.hpp"
#include "hypext/linalg.hpp"
#include "hypext/models.hpp"
#include "hypext/system.hpp"

namespace hypext {

enum class ExtensionMode { covariant_metrics, canonical_kronecker };

/// Choice of G^{AB} for the extension: either one Lorentzian metric block per
/// constraint (covariant), or the canonical Kronecker-basis block form with
/// prescribed speeds (non-covariant, built at a reference direction).
struct ExtensionSpec {
  ExtensionMode mode = ExtensionMode::covariant_metrics;
  std::vector<Eigen::MatrixXd> metrics; ///< covariant: |Gamma| blocks, n_dim x n_dim
  std::vector<double> speeds;           ///< canonical: pi_i, one per constraint block
  double damping = 0.0;                 ///< sigma >= 0

  /// Diagonal covariant spec with one coordinate-frame cone speed per block.
  static ExtensionSpec diagonal(const std::vector<double>& block_speeds, int n_dim = 4,
                                double damping = 0.0) {
    ExtensionSpec spec;
    spec.mode = ExtensionMode::covariant_metrics;
    for (double c : block_speeds)
      spec.metrics.push_back(LorentzMetric::diagonal_speed(c, n_dim).inverse_components);
    spec.damping = damping;
    return spec;
  }
};

/// Square extended symbol M^{Aa}_D over the variables (phi^alpha, Z_Gamma).
struct ExtendedSymbol {
  SystemDefinition base;
  std::vector<Eigen::MatrixXd> m; ///< per a: |A| x (|alpha| + |Gamma|)
  ExtensionMode mode = ExtensionMode::covariant_metrics;
  Eigen::VectorXd reference_k; ///< canonical mode: direction the basis was built at
  double damping = 0.0;
  int undetermined_rho_count = 0; ///< canonical mode: s-sector size
  std::vector<Eigen::MatrixXd> cleaning_metrics; ///< covariant mode: validated blocks

  int num_ext_vars() const { return base.num_vars + base.num_constraints; }

  Eigen::MatrixXd at(const Eigen::VectorXd& l) const {
    if (l.size() != base.n_dim)
      throw DimensionMismatch("extended symbol: covector has wrong length");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(base.num_eqs, num_ext_vars());
    for (int a = 0; a < base.n_dim; ++a) out += l[a] * m[a];
    return out;
  }
};

/// Assemble the extended symbol [N | G C^T]. Covariant mode pairs metric
/// block i with constraint block i in declaration order and needs the
/// equation space to split into |Gamma| spacetime-vector blocks. Canonical
/// mode realizes the block form diag(I, -D^2, I, I) in the pencil-adapted
/// basis at the frame's first spatial direction and is flagged as
/// direction-dependent (pseudodifferential).
inline ExtendedSymbol build_extended_symbol(const SystemDefinition& sys,
                                            const ExtensionSpec& spec, const Frame& frame) {
  if (spec.damping < 0.0)
    throw std::invalid_argument("extension: damping must be non-negative");
  ExtendedSymbol ext;
  ext.base = sys;
  ext.mode = spec.mode;
  ext.damping = spec.damping;

  Eigen::MatrixXd g_ab; // |A| x |A|
  if (spec.mode == ExtensionMode::covariant_metrics) {
    if (static_cast<int>(spec.metrics.size()) != sys.num_constraints)
      throw BlockMismatch("extension: need one metric block per constraint (" +
                          std::to_string(sys.num_constraints) + "), got " +
                          std::to_string(spec.metrics.size()));
    if (sys.num_eqs != sys.num_constraints * sys.n_dim)
      throw BlockMismatch(
          "extension: covariant mode needs |A| = |Gamma| * n_dim equation blocks");
    g_ab = Eigen::MatrixXd::Zero(sys.num_eqs, sys.num_eqs);
    for (int i = 0; i < sys.num_constraints; ++i) {
      const Eigen::MatrixXd& blk = spec.metrics[i];
      if (blk.rows() != sys.n_dim || blk.cols() != sys.n_dim)
        throw BlockMismatch("extension: metric block " + std::to_string(i) +
                            " has wrong dimensions");
      if ((blk - blk.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw SignatureError("extension: metric block " + std::to_string(i) +
                             " is not symmetric within 1e-12");
      Eigen::MatrixXd symm = 0.5 * (blk + blk.transpose());
      try {
        LorentzMetric check(symm); // throws SignatureError if not Lorentzian
      } catch (const SignatureError&) {
        throw SignatureError("extension: metric block " + std::to_string(i) +
                             " is not Lorentzian");
      }
      g_ab.block(i * sys.n_dim, i * sys.n_dim, sys.n_dim, sys.n_dim) = symm;
      ext.cleaning_metrics.push_back(symm);
    }
  } else {
    const Eigen::VectorXd k_ref = frame.k_basis.row(0);
    auto basis = detail::pencil_adapted_basis(sys, frame, k_ref);
    const int d = static_cast<int>(basis.x_phys.cols());
    const int r = static_cast<int>(basis.x_extra.cols());
    const int s = static_cast<int>(basis.y_left.cols());
    if (static_cast<int>(spec.speeds.size()) != r)
      throw BlockMismatch("extension: canonical mode expects " + std::to_string(r) +
                          " speeds, got " + std::to_string(spec.speeds.size()));
    Eigen::MatrixXd e(sys.num_eqs, sys.num_eqs);
    e << basis.w_phys, basis.w_a, basis.w_b, basis.y_left;
    Eigen::VectorXd diag(sys.num_eqs);
    for (int i = 0; i < d; ++i) diag(i) = 1.0;
    for (int j = 0; j < r; ++j) diag(d + j) = -spec.speeds[j] * spec.speeds[j];
    for (int j = 0; j < r + s; ++j) diag(d + r + j) = 1.0;
    g_ab = e * diag.asDiagonal() * e.transpose();
    ext.reference_k = k_ref;
    ext.undetermined_rho_count = s;
  }

  ext.m.resize(sys.n_dim);
  for (int a = 0; a < sys.n_dim; ++a) {
    ext.m[a].resize(sys.num_eqs, sys.num_vars + sys.num_constraints);
    ext.m[a].leftCols(sys.num_vars) = sys.symbol[a];
    ext.m[a].rightCols(sys.num_constraints) = g_ab * sys.constraint_proj[a].transpose();
  }
  return ext;
}

enum class HyperbolicityVerdict { strongly_hyperbolic, weakly_hyperbolic, not_hyperbolic };

inline const char* to_string(HyperbolicityVerdict v) {
  switch (v) {
    case HyperbolicityVerdict::strongly_hyperbolic: return "strongly_hyperbolic";
    case HyperbolicityVerdict::weakly_hyperbolic: return "weakly_hyperbolic";
    default: return "not_hyperbolic";
  }
}

struct HyperbolicityReport {
  struct DirRecord {
    Eigen::VectorXd k;
    std::vector<std::complex<double>> eigenvalues; ///< sorted by (re, im)
    std::vector<EigenvalueMultiplicity> clusters;
    double kappa = 0.0;
    bool all_real = true;
    bool diagonalizable = true;
  };
  HyperbolicityVerdict verdict = HyperbolicityVerdict::not_hyperbolic;
  std::vector<DirRecord> records;
  double kappa_max = 0.0;
  Eigen::VectorXd worst_k;
  double kappa_bound = 0.0;
  int eigenvector_count_min = 0; ///< min over directions of total geometric multiplicity
};

/// Certify strong hyperbolicity of the square extended symbol over sampled
/// unit spatial directions: real spectrum, full eigenvector count, and a
/// uniformly bounded eigenvector condition number (Kreiss-condition
/// surrogate on the sample set).
inline HyperbolicityReport check_strong_hyperbolicity(const ExtendedSymbol& ext,
                                                      const Frame& frame, int samples = 200,
                                                      double kappa_bound = 1e3,
                                                      unsigned seed = 0) {
  const int n = ext.num_ext_vars();
  if (ext.base.num_eqs != n)
    throw DimensionMismatch("hyperbolicity: extended symbol must be square");

  const Eigen::MatrixXd mt = ext.at(frame.n_cov);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_mt(mt);
  const double smin = svd_mt.singularValues()(n - 1);
  const double smax = svd_mt.singularValues()(0);
  if (smin <= 1e-12 * n * smax)
    throw SingularTimeSymbol("hyperbolicity: M.n is singular in this frame");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(mt);
  HyperbolicityReport report;
  report.kappa_bound = kappa_bound;
  report.eigenvector_count_min = n;
  bool any_nonreal = false, any_defective = false;

  const auto dirs = sample_directions(frame, samples, seed);
  for (const auto& k : dirs) {
    HyperbolicityReport::DirRecord rec;
    rec.k = k;
    Eigen::MatrixXd s_mat = -lu.solve(ext.at(k));
    // balancing stabilizes both the eigenvector matrix and its condition number
    Eigen::MatrixXd s_bal = s_mat;
    detail::balance_in_place(s_bal);
    Eigen::EigenSolver<Eigen::MatrixXd> es(s_bal, true);

    std::vector<std::complex<double>> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()(i);
    std::sort(eigs.begin(), eigs.end(), [](const auto& x, const auto& y) {
      if (x.real() != y.real()) return x.real() < y.real();
      return x.imag() < y.imag();
    });
    rec.eigenvalues = eigs;

    double lam_scale = 1.0;
    for (const auto& ev : eigs) lam_scale = std::max(lam_scale, std::abs(ev));
    for (const auto& ev : eigs)
      if (std::abs(ev.imag()) > 1e-9 * lam_scale) rec.all_real = false;

    // cluster and measure geometric multiplicities
    const double s_norm = std::max(1.0, detail::spectral_norm<double>(s_bal));
    std::size_t i = 0;
    int total_geo = 0;
    while (i < eigs.size()) {
      std::size_t j = i + 1;
      std::complex<double> sum = eigs[i];
      while (j < eigs.size() &&
             std::abs(eigs[j] - eigs[j - 1]) <= 1e-7 * (1.0 + std::abs(eigs[j]))) {
        sum += eigs[j];
        ++j;
      }
      const int alg = static_cast<int>(j - i);
      const std::complex<double> mu = sum / static_cast<double>(alg);
      int geo = 1;
      if (alg > 1) {
        double spread = 0.0;
        for (std::size_t t = i; t < j; ++t) spread = std::max(spread, std::abs(eigs[t] - mu));
        const double tau = 10.0 * spread + 1e-11 * s_norm;
        Eigen::MatrixXcd shifted =
            s_bal.cast<std::complex<double>>() -
            mu * Eigen::MatrixXcd::Identity(n, n);
        auto svd = detail::full_svd<std::complex<double>>(shifted);
        geo = n - detail::rank_from_singular_values(svd.sigma, tau);
        geo = std::max(1, std::min(geo, alg));
      }
      if (geo < alg) rec.diagonalizable = false;
      total_geo += geo;
      rec.clusters.push_back({mu, alg, geo});
      i = j;
    }
    report.eigenvector_count_min = std::min(report.eigenvector_count_min, total_geo);

    // eigenvector condition number of the normalized eigenvector matrix
    Eigen::MatrixXcd t_mat = es.eigenvectors();
    for (int c = 0; c < n; ++c) {
      const double nrm = t_mat.col(c).norm();
      if (nrm > 0) t_mat.col(c) /= nrm;
    }
    rec.kappa = detail::condition_number<std::complex<double>>(t_mat);

    if (!rec.all_real) any_nonreal = true;
    if (!rec.diagonalizable) any_defective = true;
    if (report.worst_k.size() == 0 || rec.kappa > report.kappa_max) {
      report.kappa_max = rec.kappa;
      report.worst_k = k;
    }
    report.records.push_back(std::move(rec));
  }

  if (any_nonreal)
    report.verdict = HyperbolicityVerdict::not_hyperbolic;
  else if (any_defective || report.kappa_max > kappa_bound ||
           !std::isfinite(report.kappa_max))
    report.verdict = HyperbolicityVerdict::weakly_hyperbolic;
  else
    report.verdict = HyperbolicityVerdict::strongly_hyperbolic;
  return report;
}

struct ConeCompatibilityReport {
  bool pass = false;
  double margin = std::numeric_limits<double>::infinity(); ///< min root separation
  std::vector<std::string> failures;
  /// Sampled directions at which some extension cone touches the base cone.
  std::vector<Eigen::VectorXd> touching_directions;
  int samples_checked = 0;
};

/// Cone compatibility of extension metrics with the base metric: the frame's
/// n must be timelike for every metric, and along every sampled spatial
/// direction no extension quadratic may share a real root with the base one
/// (non-touching light cones). The extension metrics may touch each other;
/// eigenvector completeness for that case is re-checked downstream. Touching
/// directions are classified, not truncated at the first failure.
inline ConeCompatibilityReport check_cone_compatibility(
    const std::vector<LorentzMetric>& metrics, const Frame& frame, int samples = 200,
    unsigned seed = 0) {
  ConeCompatibilityReport report;
  if (metrics.size() < 2) {
    report.failures.push_back("need the base metric plus at least one extension metric");
    return report;
  }
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const double nn = metrics[i].quad(frame.n_cov);
    if (!(nn < 0.0))
      report.failures.push_back("n is not timelike for metric " + std::to_string(i));
  }
  if (!report.failures.empty()) return report;

  const auto dirs = sample_directions(frame, samples, seed);
  report.samples_checked = static_cast<int>(dirs.size());
  for (const auto& k : dirs) {
    bool touches_here = false;
    std::array<double, 2> base;
    try {
      base = quadratic_roots(metrics[0], frame, k);
    } catch (const ComplexRoots&) {
      report.failures.push_back("base quadratic has no real roots at a sampled direction");
      return report;
    }
    for (std::size_t i = 1; i < metrics.size(); ++i) {
      std::array<double, 2> ext;
      try {
        ext = quadratic_roots(metrics[i], frame, k);
      } catch (const ComplexRoots&) {
        report.failures.push_back("extension quadratic " + std::to_string(i) +
                                  " has no real roots at a sampled direction");
        return report;
      }
      for (double rb : base)
        for (double re : ext) {
          const double sep = std::abs(rb - re);
          report.margin = std::min(report.margin, sep);
          if (sep <= 1e-8 * (1.0 + std::abs(rb))) {
            touches_here = true;
            if (report.failures.size() < 8)
              report.failures.push_back("metric " + std::to_string(i) +
                                        " touches the base cone (root separation " +
                                        std::to_string(sep) + ")");
          }
        }
    }
    if (touches_here) report.touching_directions.push_back(k);
  }
  report.pass = report.failures.empty();
  return report;
}

/// Full certification of a covariant extension: the paper's sufficient
/// conditions are non-touching Lorentzian cones plus a complete, uniformly
/// well-conditioned eigenvector basis. Touching-cone extensions are
/// classified as degenerate and never certified, regardless of their
/// pointwise eigenstructure. When no base metric is available (generic user
/// systems) the cone classification is skipped.
struct ExtensionCertificate {
  HyperbolicityReport sweep;
  std::optional<ConeCompatibilityReport> cones;
  HyperbolicityVerdict verdict = HyperbolicityVerdict::not_hyperbolic;
  bool degenerate = false; ///< touching cones detected
};

inline ExtensionCertificate certify_extension(const ExtendedSymbol& ext, const Frame& frame,
                                              const std::optional<LorentzMetric>& base_metric,
                                              int samples = 200, double kappa_bound = 1e3,
                                              unsigned seed = 0) {
  ExtensionCertificate cert;
  cert.sweep = check_strong_hyperbolicity(ext, frame, samples, kappa_bound, seed);
  cert.verdict = cert.sweep.verdict;
  if (base_metric && ext.mode == ExtensionMode::covariant_metrics) {
    std::vector<LorentzMetric> metrics = {*base_metric};
    for (const auto& blk : ext.cleaning_metrics) metrics.emplace_back(blk);
    cert.cones = check_cone_compatibility(metrics, frame, samples, seed);
    if (!cert.cones->pass) {
      cert.degenerate = !cert.cones->touching_directions.empty();
      if (cert.verdict == HyperbolicityVerdict::strongly_hyperbolic)
        cert.verdict = HyperbolicityVerdict::weakly_hyperbolic;
    }
  }
  return cert;
}

/// Eigenvalues of the pencil (M.n, M.k), sorted ascending by real part.
inline std::vector<double> characteristic_speeds(const ExtendedSymbol& ext,
                                                 const Frame& frame,
                                                 const Eigen::VectorXd& k) {
  const int n = ext.num_ext_vars();
  if (ext.base.num_eqs != n)
    throw DimensionMismatch("characteristic_speeds: extended symbol must be square");
  const Eigen::MatrixXd mt = ext.at(frame.n_cov);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mt);
  if (svd.singularValues()(n - 1) <= 1e-12 * n * svd.singularValues()(0))
    throw SingularTimeSymbol("characteristic_speeds: M.n is singular in this frame");
  Eigen::MatrixXd s_mat = -mt.partialPivLu().solve(ext.at(k));
  Eigen::EigenSolver<Eigen::MatrixXd> es(s_mat, false);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i).real();
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace hypext
