#include "liegauge/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liegauge/errors.hpp"

namespace liegauge {

LieAlgebra::LieAlgebra(std::string name, StructureConstants constants)
    : name_(std::move(name)), constants_(std::move(constants)) {
  const int n = constants_.dim();
  if (n <= 0) throw SpecError("algebra '" + name_ + "': dimension must be positive");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (constants_(k, i, j) != -constants_(k, j, i))
          throw SpecError("algebra '" + name_ + "': structure constants are not antisymmetric");
}

Eigen::VectorXd LieAlgebra::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const int n = dim();
  if (x.size() != n || y.size() != n)
    throw std::invalid_argument("bracket: vector length does not match algebra dimension");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = x[i] * y[j];
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out[k] += constants_(k, i, j) * w;
    }
  }
  return out;
}

Eigen::MatrixXd LieAlgebra::ad(int i) const {
  const int n = dim();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) m(k, j) = constants_(k, i, j);
  return m;
}

Eigen::MatrixXd LieAlgebra::ad(const Eigen::VectorXd& x) const {
  const int n = dim();
  if (x.size() != n) throw std::invalid_argument("ad: vector length does not match algebra dimension");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (x[i] != 0.0) m += x[i] * ad(i);
  return m;
}

double jacobi_residual(const StructureConstants& c) {
  const int n = c.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

Eigen::MatrixXd killing_form(const StructureConstants& c) {
  const int n = c.dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb) s += c(a, i, bb) * c(bb, j, a);
      b(i, j) = s;
      b(j, i) = s;
    }
  return b;
}

KillingMetric killing_metric(const StructureConstants& c) {
  KillingMetric km;
  km.gram = -killing_form(c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(km.gram);
  km.eigenvalues = es.eigenvalues();
  km.eigenvectors = es.eigenvectors();
  const double scale = km.eigenvalues.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (double lam : km.eigenvalues) {
    if (scale > 0.0 && std::abs(lam) > kSemisimpleRatio * scale) (lam > 0 ? pos : neg)++;
  }
  km.signature = {pos, neg};
  return km;
}

Classification classify(const KillingMetric& metric) {
  Classification cl;
  cl.signature = metric.signature;
  const Eigen::VectorXd absval = metric.eigenvalues.cwiseAbs();
  const double largest = absval.maxCoeff();
  const double smallest = absval.minCoeff();
  cl.semisimple = largest > 0.0 && smallest / largest > kSemisimpleRatio;
  cl.compact_type = cl.semisimple && metric.eigenvalues.minCoeff() > 0.0;
  return cl;
}

DualBasisPair dual_basis(const KillingMetric& metric) {
  if (!classify(metric).semisimple)
    throw DegenerateKilling("dual basis requires a nondegenerate Killing metric");
  const auto n = metric.gram.rows();
  DualBasisPair pair{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lam = metric.eigenvalues[k];
    pair.primal.col(k) = metric.eigenvectors.col(k) / std::sqrt(std::abs(lam));
    pair.dual.col(k) = (lam > 0 ? 1.0 : -1.0) * pair.primal.col(k);
  }
  return pair;
}

Eigen::MatrixXd inverse_metric(const KillingMetric& metric) {
  if (!classify(metric).semisimple)
    throw DegenerateKilling("inverse metric requires a nondegenerate Killing metric");
  const Eigen::VectorXd inv = metric.eigenvalues.cwiseInverse();
  Eigen::MatrixXd g = metric.eigenvectors * inv.asDiagonal() * metric.eigenvectors.transpose();
  return 0.5 * (g + g.transpose());
}

double pairing_error(const DualBasisPair& pair, const Eigen::MatrixXd& gram) {
  const auto n = gram.rows();
  return (pair.primal.transpose() * gram * pair.dual - Eigen::MatrixXd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

double completeness_error(const DualBasisPair& pair, const Eigen::MatrixXd& gram) {
  return (pair.primal * pair.dual.transpose() - gram.inverse()).cwiseAbs().maxCoeff();
}

double ad_invariance_residual(const LieAlgebra& alg) {
  const int n = alg.dim();
  const Eigen::MatrixXd b = killing_form(alg.constants());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += alg.constant(m, i, j) * b(m, k) + alg.constant(m, i, k) * b(j, m);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

LieAlgebra direct_sum(std::span<const LieAlgebra> summands, std::string name) {
  int n = 0;
  for (const auto& s : summands) n += s.dim();
  StructureConstants c(n);
  int base = 0;
  for (const auto& s : summands) {
    const int m = s.dim();
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c(base + k, base + i, base + j) = s.constant(k, i, j);
    base += m;
  }
  return LieAlgebra(std::move(name), std::move(c));
}

}  // namespace liegauge
