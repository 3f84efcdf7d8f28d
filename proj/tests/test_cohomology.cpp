#include <doctest.h>

#include <random>

#include "liegauge/algebra_io.hpp"
#include "liegauge/cohomology.hpp"
#include "liegauge/errors.hpp"
#include "oracles.hpp"

using namespace liegauge;

namespace {

const char* const kNamed[] = {"so3", "su2", "sl2r", "heisenberg3", "abelian4", "so4"};


Cochain random_cocycle(const LieAlgebra& alg, std::mt19937_64& rng) {
  return coboundary(alg, random_cochain(alg.dim(), 1, rng));
}

// Dual-basis route to the primitive: A(X) = sum_k [e_k, w(X, e^k)].
Eigen::MatrixXd homotopy_by_dual_basis(const LieAlgebra& alg, const Cochain& w) {
  const int n = alg.dim();
  const DualBasisPair p = dual_basis(alg);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd wx = Eigen::VectorXd::Zero(n);  // w(b_x, e^k)
      for (int b = 0; b < n; ++b) {
        const int xb[2] = {x, b};
        for (int m = 0; m < n; ++m) wx[m] += w.get(m, xb) * p.dual(b, k);
      }
      a.col(x) += alg.bracket(p.primal.col(k), wx);
    }
  return a;
}

}  // namespace

TEST_CASE("cochain storage is alternating") {
  Cochain w(3, 2);
  const int xy[2] = {0, 2};
  const int yx[2] = {2, 0};
  const int xx[2] = {1, 1};
  w.set(1, yx, 5.0);
  CHECK(w.get(1, xy) == -5.0);
  CHECK(w.get(1, yx) == 5.0);
  CHECK(w.get(1, xx) == 0.0);
  CHECK_THROWS_AS(w.set(0, xx, 1.0), std::invalid_argument);
  CHECK(w.flat().size() == 9);
  CHECK(Cochain(4, 3).flat().size() == 16);
  CHECK_THROWS_AS(Cochain(3, 4), std::invalid_argument);

  Cochain t(3, 3);
  const int abc[3] = {0, 1, 2};
  const int bca[3] = {1, 2, 0};
  const int bac[3] = {1, 0, 2};
  t.set(2, abc, 1.5);
  CHECK(t.get(2, bca) == 1.5);
  CHECK(t.get(2, bac) == -1.5);
}

TEST_CASE("degree-0 coboundary is the bracket with X") {
  const LieAlgebra so3 = named_algebra("so3");
  Cochain a(3, 0);
  a.flat()[0] = 1.0;  // A = b0
  const Cochain da = coboundary(so3, a);
  const Eigen::MatrixXd m = da.as_matrix();
  CHECK((m.col(1) + Eigen::VectorXd::Unit(3, 2)).norm() == 0.0);  // [b1, b0] = -b2
}

TEST_CASE("degree-1 coboundary matches [AX,Y] + [X,AY] - A[X,Y]") {
  std::mt19937_64 rng(3);
  for (const char* name : kNamed) {
    const LieAlgebra alg = named_algebra(name);
    const Cochain a = random_cochain(alg.dim(), 1, rng);
    const Cochain da = coboundary(alg, a);
    double worst = 0.0;
    for (int x = 0; x < alg.dim(); ++x)
      for (int y = 0; y < alg.dim(); ++y) {
        const Eigen::VectorXd ref = oracle::coboundary1_on(alg, a.as_matrix(), x, y);
        const int xy[2] = {x, y};
        for (int c = 0; c < alg.dim(); ++c) worst = std::max(worst, std::abs(da.get(c, xy) - ref[c]));
      }
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("d o d = 0") {
  std::mt19937_64 rng(17);
  for (const char* name : kNamed) {
    const LieAlgebra alg = named_algebra(name);
    for (int trial = 0; trial < 20; ++trial)
      for (int k : {0, 1}) {
        const Cochain c = random_cochain(alg.dim(), k, rng);
        CHECK(coboundary(alg, coboundary(alg, c)).max_abs() <= kIdentityTol);
      }
  }
  CHECK_THROWS_AS(coboundary(named_algebra("so3"), Cochain(3, 3)), std::invalid_argument);
}

TEST_CASE("six-term differentiated Jacobi expression equals -(d w)") {
  std::mt19937_64 rng(23);
  const LieAlgebra alg = named_algebra("so3");
  const int n = alg.dim();
  const Cochain w = random_cochain(n, 2, rng);  // not a cocycle
  const Cochain dw = coboundary(alg, w);
  auto wv = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int ij[2] = {i, j};
        for (int c = 0; c < n; ++c) out[c] += x[i] * y[j] * w.get(c, ij);
      }
    return out;
  };
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const Eigen::VectorXd X = Eigen::VectorXd::Unit(n, x), Y = Eigen::VectorXd::Unit(n, y),
                              Z = Eigen::VectorXd::Unit(n, z);
        // T(T'(X,Y),Z) + ... + T'(T(X,Y),Z) + ...
        const Eigen::VectorXd six = alg.bracket(wv(X, Y), Z) + alg.bracket(wv(Y, Z), X) + alg.bracket(wv(Z, X), Y) +
                                    wv(alg.bracket(X, Y), Z) + wv(alg.bracket(Y, Z), X) + wv(alg.bracket(Z, X), Y);
        const int xyz[3] = {x, y, z};
        for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(six[c] + dw.get(c, xyz)));
      }
  CHECK(worst <= 1e-13);
  CHECK(differentiated_jacobi_residual(alg, w) > 0.1);

  for (const char* name : kNamed) {
    const LieAlgebra a = named_algebra(name);
    const Cochain cocycle = random_cocycle(a, rng);
    CHECK(coboundary(a, cocycle).max_abs() <= kIdentityTol);
    CHECK(differentiated_jacobi_residual(a, cocycle) <= kIdentityTol);
  }
}

TEST_CASE("coboundary matrices") {
  const LieAlgebra so3 = named_algebra("so3");
  const Eigen::MatrixXd d0 = coboundary_matrix(so3, 0);
  const Eigen::MatrixXd d1 = coboundary_matrix(so3, 1);
  const Eigen::MatrixXd d2 = coboundary_matrix(so3, 2);
  CHECK(d0.rows() == 9);
  CHECK(d0.cols() == 3);
  CHECK(d1.rows() == 9);
  CHECK(d1.cols() == 9);
  CHECK(d2.rows() == 3);
  CHECK(d2.cols() == 9);
  CHECK(numerical_rank(d0) == 3);
  CHECK(numerical_rank(d1) == 6);
  CHECK(numerical_rank(d2) == 3);
  CHECK((d1 * d0).cwiseAbs().maxCoeff() <= kIdentityTol);
  CHECK((d2 * d1).cwiseAbs().maxCoeff() <= kIdentityTol);
  CHECK_THROWS_AS(coboundary_matrix(so3, 3), std::invalid_argument);

  const LieAlgebra so4 = named_algebra("so4");
  CHECK(coboundary_matrix(so4, 2).rows() == 6 * 20);
  CHECK(coboundary_matrix(so4, 2).cols() == 6 * 15);
}

TEST_CASE("cohomology dimensions") {
  // Reference values from an independent numpy rank computation.
  for (const char* name : {"so3", "su2", "sl2r", "so4"}) {
    const CohomologyDims d = cohomology_dims(named_algebra(name));
    CHECK(d.h0 == 0);
    CHECK(d.h1 == 0);
    CHECK(d.h2 == 0);
  }
  const CohomologyDims heis = cohomology_dims(named_algebra("heisenberg3"));
  CHECK(heis.h0 == 1);
  CHECK(heis.h1 == 4);
  CHECK(heis.h2 == 5);

  CHECK(cohomology_dims(named_algebra("abelian2")).h1 == 4);
  const CohomologyDims ab4 = cohomology_dims(named_algebra("abelian4"));
  CHECK(ab4.h0 == 4);
  CHECK(ab4.h1 == 16);
  CHECK(ab4.h2 == 24);
}

TEST_CASE("homotopy produces a primitive") {
  const LieAlgebra so3 = named_algebra("so3");
  CHECK(homotopy(so3, Cochain(3, 2)).max_abs() == 0.0);

  // Sign calibration: A0 maps b0 -> b1, everything else -> 0.
  Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(3, 3);
  a0(1, 0) = 1.0;
  const Cochain omega = coboundary(so3, Cochain::from_matrix(a0));
  CHECK(omega.max_abs() > 0.5);
  CHECK((coboundary(so3, homotopy(so3, omega)).flat() - omega.flat()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(kHomotopySign == 1.0);

  std::mt19937_64 rng(99);
  for (const char* name : {"so3", "sl2r", "so4"}) {
    const LieAlgebra alg = named_algebra(name);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Cochain w = random_cocycle(alg, rng);
      worst = std::max(worst, (coboundary(alg, homotopy(alg, w)).flat() - w.flat()).cwiseAbs().maxCoeff() / w.max_abs());
    }
    CHECK(worst <= 1e-9);
  }

  CHECK_THROWS_AS(homotopy(named_algebra("heisenberg3"), Cochain(3, 2)), DegenerateKilling);
  CHECK_THROWS_AS(homotopy(so3, Cochain(3, 1)), std::invalid_argument);
}

TEST_CASE("homotopy agrees with the explicit dual-basis sum") {
  std::mt19937_64 rng(4);
  for (const char* name : {"so3", "sl2r", "so4"}) {
    const LieAlgebra alg = named_algebra(name);
    const Cochain w = random_cocycle(alg, rng);
    CHECK((homotopy(alg, w).as_matrix() - homotopy_by_dual_basis(alg, w)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("codifferential is the adjoint of d") {
  std::mt19937_64 rng(8);
  for (const char* name : {"so3", "sl2r", "so4"}) {
    const LieAlgebra alg = named_algebra(name);
    const int n = alg.dim();
    for (int k = 1; k <= 3; ++k) {
      const Cochain alpha = random_cochain(n, k, rng);
      const Cochain beta = random_cochain(n, k - 1, rng);
      const double lhs = cochain_pairing(alg, codifferential(alg, alpha), beta);
      const double rhs = cochain_pairing(alg, alpha, coboundary(alg, beta));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
  CHECK_THROWS_AS(codifferential(named_algebra("heisenberg3"), Cochain(3, 1)), DegenerateKilling);
  CHECK_THROWS_AS(codifferential(named_algebra("so3"), Cochain(3, 0)), std::invalid_argument);
}

TEST_CASE("primitive is coclosed (Hodge-type)") {
  std::mt19937_64 rng(12);
  for (const char* name : {"so3", "sl2r", "so4"}) {
    const LieAlgebra alg = named_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const Cochain w = random_cocycle(alg, rng);
      const Cochain a = homotopy(alg, w);
      CHECK(codifferential(alg, a).max_abs() <= 1e-9 * w.max_abs());
      CHECK((coboundary(alg, a).flat() - w.flat()).cwiseAbs().maxCoeff() <= 1e-9 * w.max_abs());
    }
  }
}

TEST_CASE("cochain Gram matrices are symmetric and indefinite on sl2r") {
  const LieAlgebra sl2 = named_algebra("sl2r");
  for (int k = 0; k <= 3; ++k) {
    const Eigen::MatrixXd m = cochain_gram(sl2, k);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cochain_gram(sl2, 1));
  CHECK(es.eigenvalues().minCoeff() < 0.0);
  CHECK(es.eigenvalues().maxCoeff() > 0.0);
}
