#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>

#include "hypext/extension.hpp"
#include "hypext/models.hpp"

using namespace hypext;

namespace {

Eigen::VectorXd unit_k(double x, double y, double z) {
  Eigen::VectorXd k(4);
  k << 0.0, x, y, z;
  return k / k.norm();
}

/// Random anisotropic Lorentzian metric diag(-1, R^T D R) whose cone lies
/// strictly inside or outside the unit (Minkowski) cone.
Eigen::MatrixXd random_compatible_metric(std::mt19937& rng, bool outer) {
  std::uniform_real_distribution<double> speed(outer ? 1.3 : 0.35, outer ? 2.8 : 0.75);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g3(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g3(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g3);
  Eigen::MatrixXd rot = qr.householderQ();
  Eigen::Vector3d d2;
  for (int i = 0; i < 3; ++i) {
    const double c = speed(rng);
    d2(i) = c * c;
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
  g(0, 0) = -1.0;
  g.block(1, 1, 3, 3) = rot.transpose() * d2.asDiagonal() * rot;
  return 0.5 * (g + g.transpose());
}

} // namespace

TEST_CASE("LorentzMetric validation") {
  CHECK_NOTHROW(LorentzMetric::minkowski());
  CHECK_NOTHROW(LorentzMetric::diagonal_speed(1.5));
  CHECK_THROWS_AS(LorentzMetric(Eigen::MatrixXd::Identity(4, 4)), SignatureError);
  Eigen::MatrixXd asym = LorentzMetric::minkowski().inverse_components;
  asym(0, 1) = 1e-10;
  CHECK_THROWS_AS(LorentzMetric(asym), SignatureError);
}

TEST_CASE("FlowField validation") {
  auto g = LorentzMetric::minkowski();
  CHECK_NOTHROW(FlowField((Eigen::VectorXd(4) << 1, 0, 0, 0).finished(), g));
  CHECK_THROWS(FlowField((Eigen::VectorXd(4) << 2, 0, 0, 0).finished(), g));
  // boosted unit flow is fine
  const double v = 0.4, w = 1.0 / std::sqrt(1.0 - v * v);
  CHECK_NOTHROW(FlowField((Eigen::VectorXd(4) << w, w * v, 0, 0).finished(), g));
}

TEST_CASE("maxwell_system dimensions and consistency") {
  auto sys = maxwell_system(LorentzMetric::minkowski());
  CHECK(sys.num_vars == 6);
  CHECK(sys.num_eqs == 8);
  CHECK(sys.num_constraints == 2);
  CHECK(sys.n_dim == 4);
  CHECK(sys.condition3_analytic);

  // Levi-Civita self-consistency: the symmetrized contraction vanishes
  // identically by antisymmetry.
  CHECK(sys.condition2_residual() <= 1e-14);

  auto frame = Frame::standard(4);
  auto counts = structure_counts(sys, frame, unit_k(0.6, 0.0, 0.8));
  CHECK(counts.d == 4);
  CHECK(counts.r == 2);
  CHECK(counts.s == 0);
}

TEST_CASE("maxwell_system on a non-trivial constant metric still verifies") {
  std::mt19937 rng(3u);
  Eigen::MatrixXd gmat = random_compatible_metric(rng, true);
  LorentzMetric g(gmat);
  auto sys = maxwell_system(g);
  CHECK(sys.condition2_residual() <= 1e-12);
  auto frame = Frame::standard(4);
  auto rep = verify_condition2(sys, frame);
  CHECK(rep.pass);
}

TEST_CASE("toy_mhd_system dimensions and the disguised divergence") {
  auto g = LorentzMetric::minkowski();
  FlowField u((Eigen::VectorXd(4) << 1, 0, 0, 0).finished(), g);
  auto sys = toy_mhd_system(g, u);
  CHECK(sys.num_vars == 3);
  CHECK(sys.num_eqs == 4);
  CHECK(sys.num_constraints == 1);
  CHECK(sys.condition3_analytic);

  auto frame = Frame::standard(4);
  auto counts = structure_counts(sys, frame, unit_k(1, 0, 0));
  CHECK(counts.d == 2);
  CHECK(counts.r == 1);
  CHECK(counts.s == 0);

  // For constant u on a flat background, the constraint combination C.n E
  // is half the spatial divergence of b: its symbol row at spatial k is k/2.
  Eigen::VectorXd k = unit_k(0.0, 0.8, -0.6);
  Eigen::MatrixXd row = constraint_at(sys, frame.n_cov) * symbol_at(sys, k);
  REQUIRE(row.rows() == 1);
  Eigen::VectorXd expected(3);
  expected << 0.0, 0.4, -0.3; // (k . e_i)/2 in the triad enumeration
  CHECK((row.transpose() - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("characteristic_oracle values") {
  auto g = LorentzMetric::minkowski();
  auto frame = Frame::standard(4);
  Eigen::VectorXd k = unit_k(0, 0, 1);

  SECTION("Maxwell with speeds (1.5, 2.0)") {
    std::vector<LorentzMetric> metrics = {g, LorentzMetric::diagonal_speed(1.5),
                                          LorentzMetric::diagonal_speed(2.0)};
    auto oracle = characteristic_oracle(ModelKind::maxwell, metrics, frame, k);
    const std::vector<double> expect = {-2.0, -1.5, -1.0, 1.0, 1.5, 2.0};
    const std::vector<int> mult = {1, 1, 2, 2, 1, 1};
    REQUIRE(oracle.speeds.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(oracle.speeds[i] == Catch::Approx(expect[i]).margin(1e-12));
      CHECK(oracle.multiplicities[i] == mult[i]);
    }
  }
  SECTION("MHD with speed 1.5") {
    FlowField u((Eigen::VectorXd(4) << 1, 0, 0, 0).finished(), g);
    std::vector<LorentzMetric> metrics = {g, LorentzMetric::diagonal_speed(1.5)};
    auto oracle = characteristic_oracle(ModelKind::toy_mhd, metrics, frame, k, u);
    const std::vector<double> expect = {-1.5, 0.0, 1.5};
    const std::vector<int> mult = {1, 2, 1};
    REQUIRE(oracle.speeds.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(oracle.speeds[i] == Catch::Approx(expect[i]).margin(1e-12));
      CHECK(oracle.multiplicities[i] == mult[i]);
    }
  }
  SECTION("flipping k negates the speed multiset") {
    std::vector<LorentzMetric> metrics = {g, LorentzMetric::diagonal_speed(1.5),
                                          LorentzMetric::diagonal_speed(2.0)};
    Eigen::VectorXd kk = unit_k(0.36, 0.48, 0.8);
    auto a = characteristic_oracle(ModelKind::maxwell, metrics, frame, kk);
    auto b = characteristic_oracle(ModelKind::maxwell, metrics, frame, (-kk).eval());
    REQUIRE(a.speeds.size() == b.speeds.size());
    for (std::size_t i = 0; i < a.speeds.size(); ++i)
      CHECK(a.speeds[i] == Catch::Approx(-b.speeds[b.speeds.size() - 1 - i]).margin(1e-12));
  }
  SECTION("touching cones raise ComplexRoots only when degenerate") {
    // a Euclidean direction never yields complex roots for Lorentzian blocks
    std::vector<LorentzMetric> metrics = {g, LorentzMetric::diagonal_speed(1.5)};
    CHECK_NOTHROW(quadratic_roots(metrics[1], frame, k));
  }
}

TEST_CASE("oracle agreement with the extended-pencil eigenvalues") {
  auto g = LorentzMetric::minkowski();
  auto frame = Frame::standard(4);
  std::mt19937 rng(77u);
  const auto dirs = sample_directions(frame, 200);

  SECTION("Maxwell, 20 random compatible metric pairs") {
    auto sys = maxwell_system(g);
    for (int pair = 0; pair < 20; ++pair) {
      const bool outer1 = pair % 2 == 0;
      Eigen::MatrixXd g1 = random_compatible_metric(rng, outer1);
      Eigen::MatrixXd g2 = random_compatible_metric(rng, !outer1);
      ExtensionSpec spec;
      spec.metrics = {g1, g2};
      auto ext = build_extended_symbol(sys, spec, frame);
      std::vector<LorentzMetric> metrics = {g, LorentzMetric(g1), LorentzMetric(g2)};
      // spot-check a subset of directions per pair to keep runtime sane
      for (std::size_t i = 0; i < dirs.size(); i += 10) {
        auto speeds = characteristic_speeds(ext, frame, dirs[i]);
        auto oracle = characteristic_oracle(ModelKind::maxwell, metrics, frame, dirs[i]);
        std::vector<double> expect;
        for (std::size_t j = 0; j < oracle.speeds.size(); ++j)
          for (int c = 0; c < oracle.multiplicities[j]; ++c)
            expect.push_back(oracle.speeds[j]);
        REQUIRE(speeds.size() == expect.size());
        for (std::size_t j = 0; j < expect.size(); ++j)
          CHECK(speeds[j] == Catch::Approx(expect[j]).margin(1e-9));
      }
    }
  }
  SECTION("MHD over all 200 directions") {
    FlowField u((Eigen::VectorXd(4) << 1, 0, 0, 0).finished(), g);
    auto sys = toy_mhd_system(g, u);
    Eigen::MatrixXd g1 = random_compatible_metric(rng, true);
    ExtensionSpec spec;
    spec.metrics = {g1};
    auto ext = build_extended_symbol(sys, spec, frame);
    std::vector<LorentzMetric> metrics = {g, LorentzMetric(g1)};
    for (const auto& k : dirs) {
      auto speeds = characteristic_speeds(ext, frame, k);
      auto oracle = characteristic_oracle(ModelKind::toy_mhd, metrics, frame, k, u);
      std::vector<double> expect;
      for (std::size_t j = 0; j < oracle.speeds.size(); ++j)
        for (int c = 0; c < oracle.multiplicities[j]; ++c) expect.push_back(oracle.speeds[j]);
      REQUIRE(speeds.size() == expect.size());
      for (std::size_t j = 0; j < expect.size(); ++j)
        CHECK(speeds[j] == Catch::Approx(expect[j]).margin(1e-9));
    }
  }
}

TEST_CASE("physical eigenvectors factor as F = l ^ A with A orthogonal to l") {
  auto g = LorentzMetric::minkowski();
  auto sys = maxwell_system(g);
  auto frame = Frame::standard(4);
  Eigen::VectorXd k = unit_k(0.6, 0.8, 0.0);
  MatrixPencil p(symbol_at(sys, frame.n_cov), symbol_at(sys, k));

  const Eigen::VectorXd l = frame.n_cov + k; // lambda = +1 root of g l l = 0
  Eigen::MatrixXd pl = evaluate(p, 1.0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pl, Eigen::ComputeFullV);
  REQUIRE(svd.singularValues()(5) < 1e-12);
  REQUIRE(svd.singularValues()(4) < 1e-12);
  REQUIRE(svd.singularValues()(3) > 1e-6);

  const auto& pairs = detail::faraday_pairs();
  const Eigen::MatrixXd glo = g.lower();
  for (int col = 4; col < 6; ++col) {
    Eigen::VectorXd phi = svd.matrixV().col(col);
    // rebuild the antisymmetric F^{ab}
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(4, 4);
    for (int a = 0; a < 6; ++a) {
      f(pairs[a].first, pairs[a].second) = phi(a);
      f(pairs[a].second, pairs[a].first) = -phi(a);
    }
    // recover the potential direction A from F and the frame vector t
    Eigen::MatrixXd f_low = glo * f * glo;
    const double lt = l.dot(frame.t_vec);
    Eigen::VectorXd a_low(4);
    for (int d = 0; d < 4; ++d) {
      double v = 0.0;
      for (int c = 0; c < 4; ++c) v += f_low(c, d) * frame.t_vec(c);
      a_low(d) = v / lt;
    }
    // A is orthogonal to l and reproduces F = l ^ A
    const Eigen::VectorXd a_up = g.inverse_components * a_low;
    CHECK(std::abs(l.dot(a_up)) < 1e-10);
    Eigen::MatrixXd f_pred = Eigen::MatrixXd::Zero(4, 4);
    const Eigen::VectorXd l_up = g.inverse_components * l;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) f_pred(a, b) = l_up(a) * a_up(b) - l_up(b) * a_up(a);
    CHECK((f - f_pred).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("maxwell_reduction is symmetric hyperbolic") {
  auto g = LorentzMetric::minkowski();
  auto frame = Frame::standard(4);
  auto sys = maxwell_system(g);
  Eigen::MatrixXd h = maxwell_reduction(g, frame);
  REQUIRE(h.rows() == 6);
  REQUIRE(h.cols() == 8);

  Eigen::MatrixXd ha = h * symbol_at(sys, frame.n_cov);
  CHECK(std::abs(Eigen::PartialPivLU<Eigen::MatrixXd>(ha).determinant()) > 1e-6);

  // the normalized evolution symbol (hA)^-1 (hN.k) is symmetric in the E/B
  // enumeration for every spatial direction
  std::mt19937 rng(5u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd k = unit_k(gauss(rng), gauss(rng), gauss(rng));
    Eigen::MatrixXd s = ha.partialPivLu().solve(h * symbol_at(sys, k));
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // characteristic speeds at a unit direction: {-1, -1, 0, 0, 1, 1}
  Eigen::VectorXd k = unit_k(1, 0, 0);
  Eigen::MatrixXd s = ha.partialPivLu().solve(h * symbol_at(sys, k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const std::vector<double> expect = {-1, -1, 0, 0, 1, 1};
  for (int i = 0; i < 6; ++i)
    CHECK(-es.eigenvalues()(5 - i) == Catch::Approx(expect[i]).margin(1e-12));
}
