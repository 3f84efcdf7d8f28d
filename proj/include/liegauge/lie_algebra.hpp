#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>

#include "liegauge/tensor.hpp"

namespace liegauge {

/// Absolute tolerance for algebraic identities on unit-scale inputs.
inline constexpr double kIdentityTol = 1e-12;
/// Smallest admissible ratio min|eig| / max|eig| of the Killing metric.
inline constexpr double kSemisimpleRatio = 1e-9;

/// Finite-dimensional real Lie algebra given by structure constants on a basis
/// b_0..b_{n-1}. Immutable after construction.
class LieAlgebra {
 public:
  /// Throws SpecError unless n > 0 and C^k_{ij} = -C^k_{ji} exactly.
  /// Jacobi is not enforced here; see load_algebra.
  LieAlgebra(std::string name, StructureConstants constants);

  int dim() const { return constants_.dim(); }
  const std::string& name() const { return name_; }
  const StructureConstants& constants() const { return constants_; }
  double constant(int k, int i, int j) const { return constants_(k, i, j); }

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Matrix of ad_{b_i}: (ad_i)_{kj} = C^k_{ij}.
  Eigen::MatrixXd ad(int i) const;
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

 private:
  std::string name_;
  StructureConstants constants_;
};

/// Max over basis triples and output index of the Jacobiator.
double jacobi_residual(const StructureConstants& c);
inline double jacobi_residual(const LieAlgebra& alg) { return jacobi_residual(alg.constants()); }

/// B_{ij} = sum_{a,b} C^a_{ib} C^b_{ja} = tr(ad_i ad_j).
Eigen::MatrixXd killing_form(const StructureConstants& c);

struct KillingMetric {
  Eigen::MatrixXd gram;         // G = -B
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors; // orthonormal columns matching eigenvalues
  std::pair<int, int> signature;  // (positive, negative) counts
};

KillingMetric killing_metric(const StructureConstants& c);
inline KillingMetric killing_metric(const LieAlgebra& alg) { return killing_metric(alg.constants()); }

struct Classification {
  bool semisimple = false;
  bool compact_type = false;
  std::pair<int, int> signature{0, 0};
};

Classification classify(const KillingMetric& metric);
inline Classification classify(const LieAlgebra& alg) { return classify(killing_metric(alg)); }

/// Columns of `primal` are e_k, columns of `dual` are e^k, both in the b-basis,
/// with e_k^T G e^j = delta_kj.
struct DualBasisPair {
  Eigen::MatrixXd primal;
  Eigen::MatrixXd dual;
};

/// Signature split of G: e_k = q_k / sqrt|lambda_k|, e^k = sign(lambda_k) e_k.
/// Throws DegenerateKilling for non-semisimple input.
DualBasisPair dual_basis(const KillingMetric& metric);
inline DualBasisPair dual_basis(const LieAlgebra& alg) { return dual_basis(killing_metric(alg)); }

/// Inverse Killing metric; throws DegenerateKilling for non-semisimple input.
Eigen::MatrixXd inverse_metric(const KillingMetric& metric);

/// max_{k,j} |e_k^T G e^j - delta_kj|.
double pairing_error(const DualBasisPair& pair, const Eigen::MatrixXd& gram);
/// max-abs of sum_k e_k e^k^T - G^{-1}.
double completeness_error(const DualBasisPair& pair, const Eigen::MatrixXd& gram);

/// max over basis triples of |B([b_i,b_j], b_k) + B(b_j, [b_i,b_k])|.
double ad_invariance_residual(const LieAlgebra& alg);

LieAlgebra direct_sum(std::span<const LieAlgebra> summands, std::string name);

}  // namespace liegauge
