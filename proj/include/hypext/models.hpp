#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hypext/analysis.hpp"
#include "hypext/errors.hpp"
#include "hypext/system.hpp"

namespace hypext {

/// Constant Lorentzian metric given by its inverse components g^{ab},
/// signature (-, +, ..., +).
struct LorentzMetric {
  Eigen::MatrixXd inverse_components;

  explicit LorentzMetric(Eigen::MatrixXd g_inv) : inverse_components(std::move(g_inv)) {
    const auto n = inverse_components.rows();
    if (n < 2 || inverse_components.cols() != n)
      throw DimensionMismatch("metric: must be square, dimension >= 2");
    if ((inverse_components - inverse_components.transpose()).cwiseAbs().maxCoeff() > 1e-14)
      throw SignatureError("metric: inverse components must be symmetric within 1e-14");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inverse_components);
    int neg = 0, pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (es.eigenvalues()(i) < -1e-12) ++neg;
      if (es.eigenvalues()(i) > 1e-12) ++pos;
    }
    if (neg != 1 || pos != n - 1)
      throw SignatureError("metric: signature is not Lorentzian (-, +, ..., +)");
  }

  int dim() const { return static_cast<int>(inverse_components.rows()); }

  Eigen::MatrixXd lower() const { return inverse_components.inverse(); }

  double quad(const Eigen::VectorXd& l) const {
    return l.dot(inverse_components * l);
  }

  static LorentzMetric minkowski(int n_dim = 4) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n_dim, n_dim);
    g(0, 0) = -1.0;
    return LorentzMetric(g);
  }

  /// diag(-1, c^2, ..., c^2): coordinate-frame cone with speed c.
  static LorentzMetric diagonal_speed(double c, int n_dim = 4) {
    Eigen::MatrixXd g = (c * c) * Eigen::MatrixXd::Identity(n_dim, n_dim);
    g(0, 0) = -1.0;
    return LorentzMetric(g);
  }
};

/// Unit timelike flow field u^a (g_ab u^a u^b = -1).
struct FlowField {
  Eigen::VectorXd u_vec;

  FlowField(Eigen::VectorXd u, const LorentzMetric& g) : u_vec(std::move(u)) {
    if (u_vec.size() != g.dim()) throw DimensionMismatch("flow field: dimension mismatch");
    const double norm2 = u_vec.dot(g.lower() * u_vec);
    if (std::abs(norm2 + 1.0) > 1e-12)
      throw std::invalid_argument("flow field: u must be unit timelike (u.u = -1), got " +
                                  std::to_string(norm2));
  }
};

namespace detail {

inline int permutation_sign(const std::array<int, 4>& idx) {
  int sign = 1;
  std::array<int, 4> p = idx;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) {
        std::swap(p[i], p[j]);
        sign = -sign;
      }
    }
  return sign;
}

/// Contravariant Levi-Civita tensor with eps^{0123} = +(-det g_low)^{-1/2}.
inline double levi_civita_upper(const LorentzMetric& g, int d, int a, int b, int c) {
  const double det = g.lower().determinant();
  return permutation_sign({d, a, b, c}) / std::sqrt(-det);
}

/// F^{ab} component enumeration (F^{01}, F^{02}, F^{03}, F^{23}, F^{31},
/// F^{12}) = (E, B) in the coordinate frame.
inline const std::array<std::pair<int, int>, 6>& faraday_pairs() {
  static const std::array<std::pair<int, int>, 6> pairs = {
      {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};
  return pairs;
}

} // namespace detail

/// Maxwell system на a constant metric background: variables are the six
/// independent components of the antisymmetric F^{ab}, equations are
/// d_a F^{ab} = J^b plus the dualized Bianchi identity, constraints are the
/// two time projections.
inline SystemDefinition maxwell_system(const LorentzMetric& g) {
  if (g.dim() != 4) throw DimensionMismatch("maxwell_system: n_dim must be 4");
  const int nd = 4, nvars = 6, neqs = 8, ncons = 2;
  const auto& pairs = detail::faraday_pairs();
  const Eigen::MatrixXd glo = g.lower();

  std::vector<Eigen::MatrixXd> symbol(nd, Eigen::MatrixXd::Zero(neqs, nvars));
  // divergence block: d_a F^{ab}
  for (int alpha = 0; alpha < nvars; ++alpha) {
    const auto [c, d] = pairs[alpha];
    symbol[c](d, alpha) += 1.0; // dF^{cd} in equation b = d, derivative a = c
    symbol[d](c, alpha) -= 1.0;
  }
  // dual Bianchi block: eps^{dabc} d_a F_{bc}
  for (int dd = 0; dd < nd; ++dd)
    for (int a = 0; a < nd; ++a) {
      for (int alpha = 0; alpha < nvars; ++alpha) {
        const auto [p, q] = pairs[alpha];
        double coeff = 0.0;
        for (int b = 0; b < nd; ++b)
          for (int c = 0; c < nd; ++c)
            coeff += detail::levi_civita_upper(g, dd, a, b, c) *
                     (glo(b, p) * glo(c, q) - glo(b, q) * glo(c, p));
        symbol[a](4 + dd, alpha) += coeff;
      }
    }

  std::vector<Eigen::MatrixXd> cproj(nd, Eigen::MatrixXd::Zero(ncons, neqs));
  for (int a = 0; a < nd; ++a) {
    cproj[a](0, a) = 1.0;     // picks equation b = a of the divergence block
    cproj[a](1, 4 + a) = 1.0; // picks equation d = a of the Bianchi block
  }

  auto sys = SystemDefinition::create("maxwell", nd, std::move(symbol), std::move(cproj));
  sys.condition3_analytic = true;
  sys.condition3_note =
      "analytic: satisfied (divergence of the constraint combination vanishes identically)";
  return sys;
}

/// The symmetric-hyperbolic Maxwell reduction h_{beta B} =
/// (g_{q[r} t_{s]}, -(3/2) eps_{pars} t^a) in the frame's t.
inline Eigen::MatrixXd maxwell_reduction(const LorentzMetric& g, const Frame& frame) {
  if (g.dim() != 4 || frame.dim() != 4)
    throw DimensionMismatch("maxwell_reduction: n_dim must be 4");
  const auto& pairs = detail::faraday_pairs();
  const Eigen::MatrixXd glo = g.lower();
  const Eigen::VectorXd t = frame.t_vec;
  const Eigen::VectorXd t_low = glo * t;
  const double tt = t.dot(t_low);
  if (tt >= 0.0)
    throw std::invalid_argument("maxwell_reduction: frame vector t must be timelike");

  // lowered Levi-Civita
  auto eps_low = [&](int p, int a, int r, int s) {
    double out = 0.0;
    for (int p2 = 0; p2 < 4; ++p2)
      for (int a2 = 0; a2 < 4; ++a2)
        for (int r2 = 0; r2 < 4; ++r2)
          for (int s2 = 0; s2 < 4; ++s2)
            out += glo(p, p2) * glo(a, a2) * glo(r, r2) * glo(s, s2) *
                   detail::levi_civita_upper(g, p2, a2, r2, s2);
    return out;
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(6, 8);
  for (int beta = 0; beta < 6; ++beta) {
    const auto [r, s] = pairs[beta];
    for (int q = 0; q < 4; ++q)
      h(beta, q) = 0.5 * (glo(q, r) * t_low(s) - glo(q, s) * t_low(r));
    for (int p = 0; p < 4; ++p) {
      double val = 0.0;
      for (int a = 0; a < 4; ++a) val += eps_low(p, a, r, s) * t(a);
      h(beta, 4 + p) = -1.5 * val;
    }
  }
  return h;
}

/// Toy MHD: a magnetic field b^a advected by a constant unit flow u^a, with
/// the gauge u.b = 0 enforced by parametrizing b in a g-orthonormal triad
/// completing u. Four equations, three variables, one constraint.
inline SystemDefinition toy_mhd_system(const LorentzMetric& g, const FlowField& u) {
  if (g.dim() != 4) throw DimensionMismatch("toy_mhd_system: n_dim must be 4");
  const int nd = 4;
  const Eigen::MatrixXd glo = g.lower();

  // g-orthonormal triad orthogonal to u
  std::vector<Eigen::VectorXd> triad;
  for (int i = 0; i < nd && static_cast<int>(triad.size()) < 3; ++i) {
    Eigen::VectorXd cand = Eigen::VectorXd::Unit(nd, i);
    cand += (cand.dot(glo * u.u_vec)) * u.u_vec; // project out u (u.u = -1)
    for (const auto& e : triad) cand -= (cand.dot(glo * e)) * e;
    const double nrm2 = cand.dot(glo * cand);
    if (nrm2 < 1e-10) continue;
    triad.push_back(cand / std::sqrt(nrm2));
  }
  if (triad.size() != 3) throw Error("toy_mhd_system: triad completion failed");

  std::vector<Eigen::MatrixXd> symbol(nd, Eigen::MatrixXd::Zero(4, 3));
  for (int b = 0; b < nd; ++b)
    for (int a = 0; a < nd; ++a)
      for (int i = 0; i < 3; ++i)
        symbol[a](b, i) = 0.5 * (u.u_vec(b) * triad[i](a) - triad[i](b) * u.u_vec(a));

  std::vector<Eigen::MatrixXd> cproj(nd, Eigen::MatrixXd::Zero(1, 4));
  for (int a = 0; a < nd; ++a) cproj[a](0, a) = 1.0;

  auto sys = SystemDefinition::create("toy_mhd", nd, std::move(symbol), std::move(cproj));
  sys.condition3_analytic = true;
  sys.condition3_note =
      "analytic: satisfied (double divergence of the antisymmetric flux vanishes)";
  return sys;
}

enum class ModelKind { maxwell, toy_mhd };

/// Analytic characteristic speeds of the extended models: roots of the
/// quadratics g_i^{ab} l_a l_b with l = lambda n + k, plus the physical
/// roots (base-metric null speeds for Maxwell, the double flow root for MHD).
struct OracleSpeeds {
  std::vector<double> speeds;        ///< sorted ascending, with multiplicity
  std::vector<int> multiplicities;  ///< eigenvector count per entry of `speeds`
};

inline std::array<double, 2> quadratic_roots(const LorentzMetric& g, const Frame& frame,
                                             const Eigen::VectorXd& k) {
  const double a = g.quad(frame.n_cov);
  const Eigen::VectorXd gn = g.inverse_components * frame.n_cov;
  const double b = 2.0 * k.dot(gn);
  const double c = g.quad(k);
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0 || a == 0.0)
    throw ComplexRoots("characteristic quadratic has no two real roots in this frame");
  const double sq = std::sqrt(disc);
  double r1 = (-b - sq) / (2.0 * a);
  double r2 = (-b + sq) / (2.0 * a);
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

inline OracleSpeeds characteristic_oracle(ModelKind model,
                                          const std::vector<LorentzMetric>& metrics,
                                          const Frame& frame, const Eigen::VectorXd& k,
                                          const std::optional<FlowField>& flow = {}) {
  std::vector<std::pair<double, int>> entries;
  if (model == ModelKind::maxwell) {
    if (metrics.size() != 3)
      throw DimensionMismatch("oracle: maxwell expects metrics (g, g1, g2)");
    const auto phys = quadratic_roots(metrics[0], frame, k);
    entries.push_back({phys[0], 2});
    entries.push_back({phys[1], 2});
    for (int i = 1; i <= 2; ++i) {
      const auto ext = quadratic_roots(metrics[i], frame, k);
      entries.push_back({ext[0], 1});
      entries.push_back({ext[1], 1});
    }
  } else {
    if (metrics.size() != 2)
      throw DimensionMismatch("oracle: toy_mhd expects metrics (g, g1)");
    if (!flow) throw std::invalid_argument("oracle: toy_mhd needs the flow field");
    const double un = flow->u_vec.dot(frame.n_cov);
    const double uk = flow->u_vec.dot(k);
    entries.push_back({-uk / un, 2}); // double physical root u.l = 0
    const auto ext = quadratic_roots(metrics[1], frame, k);
    entries.push_back({ext[0], 1});
    entries.push_back({ext[1], 1});
  }
  std::sort(entries.begin(), entries.end());
  OracleSpeeds out;
  for (const auto& [v, m] : entries) {
    out.speeds.push_back(v);
    out.multiplicities.push_back(m);
  }
  return out;
}

} // namespace hypext
