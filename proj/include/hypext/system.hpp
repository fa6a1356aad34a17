#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hypext/errors.hpp"
#include "hypext/linalg.hpp"

namespace hypext {

/// Constrained first-order system with constant coefficients:
/// N^{Aa}_alpha d_a phi^alpha = J^A, with Geroch projectors C^{Gamma a}_A.
/// The symbol and projectors are stored as one matrix per spacetime index a.
struct SystemDefinition {
  std::string name;
  int n_dim = 0;
  int num_vars = 0;        ///< |alpha|
  int num_eqs = 0;         ///< |A|
  int num_constraints = 0; ///< |Gamma|

  std::vector<Eigen::MatrixXd> symbol;          ///< per a: |A| x |alpha|
  std::vector<Eigen::MatrixXd> constraint_proj; ///< per a: |Gamma| x |A|
  Eigen::VectorXd source;                       ///< |A|, may be zero

  /// Condition-3 status: an analytic fact recorded for built-in models,
  /// "unverified" otherwise (monitored numerically by the evolution lab).
  bool condition3_analytic = false;
  std::string condition3_note = "unverified";

  /// Max entry of the symmetrized contraction C^{Gamma(a}_A N^{b)A}_alpha.
  double condition2_residual() const {
    double worst = 0.0;
    for (int a = 0; a < n_dim; ++a)
      for (int b = a; b < n_dim; ++b) {
        Eigen::MatrixXd sym =
            constraint_proj[a] * symbol[b] + constraint_proj[b] * symbol[a];
        if (sym.size() > 0) worst = std::max(worst, sym.cwiseAbs().maxCoeff());
      }
    return worst;
  }

  enum class Validation { strict, lenient };

  static SystemDefinition create(std::string name, int n_dim,
                                 std::vector<Eigen::MatrixXd> symbol,
                                 std::vector<Eigen::MatrixXd> constraint_proj,
                                 Eigen::VectorXd source = {},
                                 Validation mode = Validation::strict) {
    SystemDefinition sys;
    sys.name = std::move(name);
    sys.n_dim = n_dim;
    if (n_dim < 2) throw DimensionMismatch("system: n_dim must be at least 2");
    if (static_cast<int>(symbol.size()) != n_dim ||
        static_cast<int>(constraint_proj.size()) != n_dim)
      throw DimensionMismatch("system: need one symbol/projector slice per spacetime index");
    sys.num_eqs = static_cast<int>(symbol[0].rows());
    sys.num_vars = static_cast<int>(symbol[0].cols());
    sys.num_constraints = static_cast<int>(constraint_proj[0].rows());
    for (const auto& s : symbol)
      if (s.rows() != sys.num_eqs || s.cols() != sys.num_vars)
        throw DimensionMismatch("system: ragged symbol tensor");
    for (const auto& c : constraint_proj)
      if (c.rows() != sys.num_constraints || c.cols() != sys.num_eqs)
        throw DimensionMismatch("system: ragged constraint projector tensor");
    if (sys.num_eqs != sys.num_vars + sys.num_constraints)
      throw DimensionMismatch(
          "system: consistency identity |A| = |alpha| + |Gamma| violated (" +
          std::to_string(sys.num_eqs) + " != " + std::to_string(sys.num_vars) + " + " +
          std::to_string(sys.num_constraints) + ")");
    sys.symbol = std::move(symbol);
    sys.constraint_proj = std::move(constraint_proj);
    if (source.size() == 0)
      sys.source = Eigen::VectorXd::Zero(sys.num_eqs);
    else if (source.size() == sys.num_eqs)
      sys.source = std::move(source);
    else
      throw DimensionMismatch("system: source length must be |A|");
    for (const auto& s : sys.symbol)
      if (!s.allFinite()) throw std::invalid_argument("system: non-finite symbol entry");
    for (const auto& c : sys.constraint_proj)
      if (!c.allFinite()) throw std::invalid_argument("system: non-finite projector entry");

    if (mode == Validation::strict) {
      const double res = sys.condition2_residual();
      if (res > 1e-12)
        throw Condition2Violation("system: symmetrized kernel identity residual " +
                                  std::to_string(res) + " exceeds 1e-12");
    }
    return sys;
  }
};

/// Contract the symbol with a covector l_a.
inline Eigen::MatrixXd symbol_at(const SystemDefinition& sys, const Eigen::VectorXd& l) {
  if (l.size() != sys.n_dim)
    throw DimensionMismatch("symbol_at: covector has wrong length");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sys.num_eqs, sys.num_vars);
  for (int a = 0; a < sys.n_dim; ++a) out += l[a] * sys.symbol[a];
  return out;
}

/// Contract the constraint projector with a covector l_a.
inline Eigen::MatrixXd constraint_at(const SystemDefinition& sys, const Eigen::VectorXd& l) {
  if (l.size() != sys.n_dim)
    throw DimensionMismatch("constraint_at: covector has wrong length");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sys.num_constraints, sys.num_eqs);
  for (int a = 0; a < sys.n_dim; ++a) out += l[a] * sys.constraint_proj[a];
  return out;
}

/// Time covector n_a, transversal vector t^a with t.n = 1, and an orthonormal
/// basis of spatial covectors k with t.k = 0.
struct Frame {
  Eigen::VectorXd n_cov;
  Eigen::VectorXd t_vec;
  Eigen::MatrixXd k_basis; ///< (n_dim - 1) rows, each a unit covector

  int dim() const { return static_cast<int>(n_cov.size()); }

  static Frame build(Eigen::VectorXd n, Eigen::VectorXd t) {
    Frame f;
    if (n.size() != t.size() || n.size() < 2)
      throw DimensionMismatch("frame: n and t must share dimension >= 2");
    const double tn = t.dot(n);
    if (std::abs(tn - 1.0) > 1e-12)
      throw std::invalid_argument("frame: t.n must equal 1 (got " + std::to_string(tn) + ")");
    f.n_cov = std::move(n);
    f.t_vec = std::move(t);
    const int d = f.dim();
    // deterministic orthonormal completion of {k : t.k = 0}
    Eigen::VectorXd that = f.t_vec.normalized();
    f.k_basis.resize(d - 1, d);
    int row = 0;
    for (int i = 0; i < d && row < d - 1; ++i) {
      Eigen::VectorXd cand = Eigen::VectorXd::Unit(d, i);
      cand -= cand.dot(that) * that;
      for (int j = 0; j < row; ++j)
        cand -= cand.dot(f.k_basis.row(j)) * f.k_basis.row(j).transpose();
      const double nrm = cand.norm();
      if (nrm < 1e-8) continue;
      f.k_basis.row(row++) = cand / nrm;
    }
    if (row != d - 1) throw std::invalid_argument("frame: basis completion failed");
    return f;
  }

  /// n = dt, t = d/dt in coordinates.
  static Frame standard(int n_dim) {
    return build(Eigen::VectorXd::Unit(n_dim, 0), Eigen::VectorXd::Unit(n_dim, 0));
  }

  /// Spatial covector from coefficients in the k-basis.
  Eigen::VectorXd spatial(const Eigen::VectorXd& coeffs) const {
    if (coeffs.size() != dim() - 1)
      throw DimensionMismatch("frame: coefficient vector has wrong length");
    return k_basis.transpose() * coeffs;
  }
};

/// Deterministic unit directions in the frame's spatial span: all signed
/// coordinate axes first, then a Fibonacci spiral filling up to `count`
/// points, then `n_random` seeded Gaussian directions.
inline std::vector<Eigen::VectorXd> sample_directions(const Frame& frame, int count,
                                                      unsigned seed = 0, int n_random = 0) {
  const int sd = frame.dim() - 1; // spatial dimension
  std::vector<Eigen::VectorXd> coeffs;
  for (int i = 0; i < sd; ++i) {
    coeffs.push_back(Eigen::VectorXd::Unit(sd, i));
    coeffs.push_back(-Eigen::VectorXd::Unit(sd, i));
  }
  const int want = count - static_cast<int>(coeffs.size());
  if (want > 0) {
    if (sd == 1) {
      // nothing beyond the two signs
    } else if (sd == 2) {
      for (int j = 0; j < want; ++j) {
        const double ang = std::numbers::pi * (2.0 * j + 1.0) / want;
        coeffs.push_back((Eigen::VectorXd(2) << std::cos(ang), std::sin(ang)).finished());
      }
    } else if (sd == 3) {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int j = 0; j < want; ++j) {
        const double z = 1.0 - (2.0 * j + 1.0) / want;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ang = golden * j;
        coeffs.push_back((Eigen::VectorXd(3) << rad * std::cos(ang), rad * std::sin(ang), z)
                             .finished());
      }
    } else {
      std::mt19937 rng(seed ^ 0x9e3779b9u);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int j = 0; j < want; ++j) {
        Eigen::VectorXd c(sd);
        do {
          for (int i = 0; i < sd; ++i) c[i] = gauss(rng);
        } while (c.norm() < 1e-8);
        coeffs.push_back(c.normalized());
      }
    }
  }
  if (n_random > 0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < n_random; ++j) {
      Eigen::VectorXd c(sd);
      do {
        for (int i = 0; i < sd; ++i) c[i] = gauss(rng);
      } while (c.norm() < 1e-8);
      coeffs.push_back(c.normalized());
    }
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(frame.spatial(c));
  return out;
}

} // namespace hypext
