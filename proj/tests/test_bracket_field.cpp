#include <doctest.h>

#include <cmath>
#include <cstring>

#include <unsupported/Eigen/MatrixFunctions>

#include "liegauge/algebra_io.hpp"
#include "liegauge/bracket_field.hpp"
#include "liegauge/errors.hpp"

using namespace liegauge;

namespace {

BracketField make_field(const LieAlgebra& alg, const FrameField& frame, double h, int count, double radius = 0.4,
                        std::uint64_t seed = 7) {
  const Chart chart = make_chart(alg.dim(), h, radius, sample_points(alg.dim(), radius - 2 * 0.04, count, seed));
  return bracket_field_from_frame(alg, frame, chart);
}

BracketField make_field(const LieAlgebra& alg, FrameKind kind, double h, int count) {
  return make_field(alg, frame_field(alg, kind), h, count);
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("transported brackets") {
  const LieAlgebra so3 = named_algebra("so3");
  SUBCASE("identity frame keeps C") {
    const FieldSample s = transport_bracket(so3, Eigen::Matrix3d::Identity());
    CHECK((s.bracket - so3.constants()).max_abs() == 0.0);
    CHECK((s.metric - 2.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("scaled frame halves T and the metric") {
    const FieldSample s = transport_bracket(so3, 2.0 * Eigen::Matrix3d::Identity());
    CHECK((s.bracket - 0.5 * so3.constants()).max_abs() == 0.0);
    CHECK((s.metric - 0.5 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("inner automorphisms preserve the structure constants") {
    const LieAlgebra sl2 = named_algebra("sl2r");
    const Eigen::MatrixXd adv = sl2.ad(Eigen::Vector3d(0.3, -0.7, 0.2));
    const FrameField inner = custom_frame(3, [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      return (x[0] * adv).exp();
    });
    const BracketField f = make_field(sl2, inner, 0.02, 5, 0.2);
    for (const auto& st : f.stencils) CHECK((st.at_center().bracket - sl2.constants()).max_abs() <= 1e-12);
  }
  SUBCASE("singular frame") {
    Eigen::Matrix3d u = Eigen::Matrix3d::Identity();
    u(2, 2) = 1e-9;
    CHECK_THROWS_AS(transport_bracket(so3, u), ConditioningError);
  }
  SUBCASE("degenerate metric") {
    CHECK_THROWS_AS(transport_bracket(named_algebra("heisenberg3"), Eigen::Matrix3d::Identity()), ConditioningError);
  }
}

TEST_CASE("stencil layout and chart exclusion") {
  const LieAlgebra so3 = named_algebra("so3");
  const FrameField id = frame_field(so3, FrameKind::identity);
  const PointStencil s(so3, id, Eigen::Vector3d::Zero(), 0.01);
  // 1 + 2n + 2n (the +-2h points) + 4 * n(n-1)/2
  CHECK(s.size() == 1 + 6 + 6 + 12);
  const int far[3] = {3, 0, 0};
  CHECK_THROWS_AS(s.at(far), std::out_of_range);
  const int corner[3] = {1, 1, 1};
  CHECK_THROWS_AS(s.at(corner), std::out_of_range);

  std::vector<Eigen::VectorXd> pts{Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(0.39, 0.0, 0.0),
                                   Eigen::Vector3d(-0.1, 0.36, 0.0)};
  const BracketField f = bracket_field_from_frame(so3, id, make_chart(3, 0.02, 0.4, pts));
  CHECK(f.point_ids == std::vector<int>{0, 2});
}

TEST_CASE("exp_chart radius guard") {
  const LieAlgebra so3 = named_algebra("so3");
  const Chart chart = make_chart(3, 0.02, 1.2, {Eigen::Vector3d::Zero()});
  CHECK_THROWS_AS(bracket_field_from_frame(so3, frame_field(so3, FrameKind::exp_chart), chart), ConditioningError);
}

TEST_CASE("constant field: everything vanishes") {
  const LieAlgebra so3 = named_algebra("so3");
  const BracketField f = make_field(so3, FrameKind::identity, 0.02, 10);
  for (const auto& s : f.stencils) {
    const SquareTensor<3> gamma = christoffel(s);
    CHECK(gamma.max_abs() == 0.0);
    const SquareTensor<4> dt = covariant_derivative(s, gamma);
    CHECK(dt.max_abs() == 0.0);
    CHECK(exterior_covariant_derivative(dt).max_abs() == 0.0);
    CHECK(gauge_field(s.at_center(), dt).max_abs() == 0.0);
    CHECK(riemann(s).max_abs() <= 1e-12);
  }
  const DiagnosticsReport r = residual_report(f);
  CHECK(r.points.size() == 10);
  CHECK(r.max.tau == 0.0);
  CHECK(r.max.gauge == 0.0);
  CHECK(r.max.dt == 0.0);
  CHECK(r.max.ddt == 0.0);
  CHECK(r.max.nabla_residual == 0.0);
  CHECK(r.max.metric_skew == 0.0);
  CHECK(r.max.riemann == 0.0);
}

TEST_CASE("symmetry types on a non-integrable field") {
  const LieAlgebra so4 = named_algebra("so4");
  const BracketField f = make_field(so4, FrameKind::random_smooth, 0.02, 4);
  const int n = 6;
  for (const auto& s : f.stencils) {
    const FieldSample& at = s.at_center();
    CHECK(jacobi_residual(at.bracket) <= kPointJacobiTol);
    const SquareTensor<3> gamma = christoffel(s);
    const SquareTensor<3> dg = metric_derivative(s, std::vector<int>(n, 0));
    const SquareTensor<4> dt = covariant_derivative(s, gamma);
    const SquareTensor<4> ddt = exterior_covariant_derivative(dt);
    const SquareTensor<3> a = gauge_field(at, dt);
    const SquareTensor<3> tau = torsion(a);
    const SquareTensor<4> r = riemann(s);
    double gamma_sym = 0, compat = 0, dt_anti = 0, ddt_anti = 0, tau_anti = 0, r_anti = 0;
    const double gscale = at.metric.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          gamma_sym = std::max(gamma_sym, std::abs(gamma(k, i, j) - gamma(k, j, i)));
          tau_anti = std::max(tau_anti, std::abs(tau(k, i, j) + tau(k, j, i)));
          double c = dg(k, i, j);
          for (int l = 0; l < n; ++l) c -= gamma(l, k, i) * at.metric(l, j) + gamma(l, k, j) * at.metric(l, i);
          compat = std::max(compat, std::abs(c));
          for (int l = 0; l < n; ++l) {
            dt_anti = std::max(dt_anti, std::abs(dt(l, k, i, j) + dt(l, k, j, i)));
            ddt_anti = std::max({ddt_anti, std::abs(ddt(l, i, j, k) + ddt(l, j, i, k)),
                                 std::abs(ddt(l, i, j, k) + ddt(l, i, k, j)),
                                 std::abs(ddt(l, i, j, k) + ddt(l, k, j, i))});
            r_anti = std::max(r_anti, std::abs(r(l, k, i, j) + r(l, k, j, i)));
          }
        }
    CHECK(gamma_sym == 0.0);
    CHECK(tau_anti == 0.0);
    CHECK(r_anti == 0.0);
    CHECK(compat <= 1e-12 * std::max(1.0, gscale / 0.02));
    CHECK(dt_anti <= 1e-12 * std::max(1.0, dt.max_abs()));
    CHECK(ddt_anti <= 1e-12 * std::max(1.0, ddt.max_abs()));
  }
}

TEST_CASE("gauge field equals the explicit dual-basis sum") {
  const LieAlgebra sl2 = named_algebra("sl2r");
  const BracketField f = make_field(sl2, frame_field(sl2, FrameKind::random_smooth), 0.02, 3, 0.2);
  const int n = 3;
  for (const auto& s : f.stencils) {
    const FieldSample& at = s.at_center();
    const SquareTensor<4> dt = covariant_derivative(s, christoffel(s));
    const SquareTensor<3> a = gauge_field(at, dt);
    const DualBasisPair p = dual_basis(killing_metric(at.bracket));
    // A_i b = sum_k T(e_k, (D_i T)(b, e^k))
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) {
          Eigen::VectorXd inner = Eigen::VectorXd::Zero(n);
          for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) inner[m] += dt(i, m, b, l) * p.dual(l, k);
          for (int c = 0; c < n; ++c)
            for (int q = 0; q < n; ++q)
              for (int m = 0; m < n; ++m) sum[c] += at.bracket(c, q, m) * p.primal(q, k) * inner[m];
        }
        for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(sum[c] - a(i, c, b)));
      }
    CHECK(worst <= 1e-12 * std::max(1.0, a.max_abs()));
  }
}

TEST_CASE("field-level operations agree with the report") {
  const LieAlgebra so4 = named_algebra("so4");
  const BracketField f = make_field(so4, FrameKind::random_smooth, 0.02, 3);
  const DiagnosticsReport r = residual_report(f);
  const auto dt = covariant_derivative_T(f);
  const auto ddt = dD_T(f);
  const auto a = gauge_field_A(f);
  const auto tau = torsion_field(f);
  const auto curv = curvature_field(f);
  REQUIRE(christoffel_field(f).size() == 3);
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(r.points[p].norms.dt == dt[p].max_abs());
    CHECK(r.points[p].norms.ddt == ddt[p].max_abs());
    CHECK(r.points[p].norms.gauge == a[p].max_abs());
    CHECK(r.points[p].norms.tau == tau[p].max_abs());
    CHECK(r.points[p].norms.riemann == curv[p].max_abs());
  }
}

TEST_CASE("nabla T = 0 to second order on a non-integrable so4 field") {
  const LieAlgebra so4 = named_algebra("so4");
  const FrameField u = frame_field(so4, FrameKind::random_smooth);
  const DiagnosticsReport c = residual_report(make_field(so4, u, 0.04, 12));
  const DiagnosticsReport f = residual_report(make_field(so4, u, 0.02, 12));
  CHECK(c.max.dt > 1.0);
  CHECK(f.max.dt / c.max.dt == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f.max.tau > 1.0);
  CHECK(order(c.max.nabla_residual, f.max.nabla_residual) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(order(c.max.metric_skew, f.max.metric_skew) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("so3 structures are always Levi-Civita parallel") {
  // so(G) = ad(so3) in dimension 3, so DT vanishes in the continuum for every frame;
  // only discretization error remains.
  const LieAlgebra so3 = named_algebra("so3");
  const FrameField u = frame_field(so3, FrameKind::random_smooth);
  const DiagnosticsReport c = residual_report(make_field(so3, u, 0.04, 20));
  const DiagnosticsReport f = residual_report(make_field(so3, u, 0.02, 20));
  CHECK(order(c.max.dt, f.max.dt) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(order(c.max.tau, f.max.tau) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(f.max.nabla_residual <= 1e-12);
  CHECK(f.max.riemann > 1.0);  // not flat
}

TEST_CASE("exp_chart curvature approaches the bi-invariant value") {
  const LieAlgebra so3 = named_algebra("so3");
  const FrameField u = frame_field(so3, FrameKind::exp_chart);
  const PointStencil coarse(so3, u, Eigen::Vector3d::Zero(), 0.02);
  const PointStencil fine(so3, u, Eigen::Vector3d::Zero(), 0.01);
  // At the origin the chart frame is the algebra basis: R^l_{kij} = -1/4 C^m_{ij} C^l_{mk}.
  SquareTensor<4> expected(3);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int m = 0; m < 3; ++m) expected(l, k, i, j) -= 0.25 * so3.constant(m, i, j) * so3.constant(l, m, k);
  const double ec = (riemann(coarse) - expected).max_abs();
  const double ef = (riemann(fine) - expected).max_abs();
  CHECK(ef < 1e-4);
  CHECK(order(ec, ef) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("reports do not depend on the thread count") {
  const LieAlgebra so3 = named_algebra("so3");
  const FrameField u = frame_field(so3, FrameKind::random_smooth);
  const Chart chart = make_chart(3, 0.02, 0.4, sample_points(3, 0.36, 40, 3));
  const DiagnosticsReport one = residual_report(bracket_field_from_frame(so3, u, chart, {1}), {1});
  const DiagnosticsReport many = residual_report(bracket_field_from_frame(so3, u, chart, {4}), {4});
  REQUIRE(one.points.size() == many.points.size());
  for (std::size_t p = 0; p < one.points.size(); ++p) {
    CHECK(one.points[p].point_id == many.points[p].point_id);
    CHECK(std::memcmp(&one.points[p].norms, &many.points[p].norms, sizeof(DiagnosticNorms)) == 0);
  }
}
