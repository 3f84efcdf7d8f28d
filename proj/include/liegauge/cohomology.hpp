#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <vector>

#include "liegauge/lie_algebra.hpp"

namespace liegauge {

inline constexpr int kMaxCochainDegree = 3;
/// Relative singular-value threshold for numerical rank.
inline constexpr double kRankTol = 1e-9;

/// Ascending k-subsets of {0..n-1} in lexicographic order.
class SubsetIndex {
 public:
  SubsetIndex(int n, int k);

  int size() const { return static_cast<int>(subsets_.size()); }
  const std::vector<int>& subset(int s) const { return subsets_[s]; }
  /// Position of an ascending subset; -1 if absent.
  int find(std::span<const int> ascending) const;

 private:
  int n_;
  int k_;
  std::vector<std::vector<int>> subsets_;
};

/// Alternating k-form on the algebra with values in the algebra (adjoint
/// coefficients). Only ascending index tuples are stored; the flat layout is
/// value index fastest: flat = c + n * subset_position.
class Cochain {
 public:
  Cochain(int n, int degree);
  Cochain(int n, int degree, Eigen::VectorXd flat);

  int dim() const { return n_; }
  int degree() const { return degree_; }
  const Eigen::VectorXd& flat() const { return flat_; }
  Eigen::VectorXd& flat() { return flat_; }

  /// omega^c(b_{i_1}, ..., b_{i_k}) for arbitrary index order; repeated indices give 0.
  double get(int c, std::span<const int> indices) const;
  /// Sets the component for the given indices, sign-adjusted to canonical order.
  void set(int c, std::span<const int> indices, double value);

  /// Degree-1 cochains as n x n matrices: M(c, x) = A^c_x.
  Eigen::MatrixXd as_matrix() const;
  static Cochain from_matrix(const Eigen::MatrixXd& m);

  double max_abs() const { return flat_.size() ? flat_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  int n_;
  int degree_;
  SubsetIndex index_;
  Eigen::VectorXd flat_;
};

/// Chevalley-Eilenberg coboundary with adjoint coefficients:
///   (d w)(X_0..X_k) = sum_i (-1)^i [X_i, w(..^X_i..)]
///                   + sum_{i<j} (-1)^{i+j} w([X_i, X_j], ..^X_i..^X_j..)
/// so (dA)(X) = [X, A], (dA)(X,Y) = [AX,Y] + [X,AY] - A[X,Y], and in degree 2
/// the six-term differentiated Jacobi expression equals -(d w).
/// Throws std::invalid_argument for degree >= 3.
Cochain coboundary(const LieAlgebra& alg, const Cochain& c);

/// Matrix of d: C^k -> C^{k+1} in the flat layouts, k in {0,1,2}.
Eigen::MatrixXd coboundary_matrix(const LieAlgebra& alg, int k);

/// Number of singular values above kRankTol * largest.
int numerical_rank(const Eigen::MatrixXd& m);

struct CohomologyDims {
  int h0 = 0;
  int h1 = 0;
  int h2 = 0;
};

CohomologyDims cohomology_dims(const LieAlgebra& alg);

/// Coclosed primitive of a 2-cocycle:
///   A^c_x = sum_{a,b,m} (G^{-1})^{ab} C^c_{am} w^m_{xb},
/// i.e. A(X) = sum_k [e_k, w(X, e^k)]. With this coboundary convention the
/// sign is +1 (calibrated on so3). Throws DegenerateKilling.
Cochain homotopy(const LieAlgebra& alg, const Cochain& omega);
inline constexpr double kHomotopySign = 1.0;

/// Gram matrix of the cochain pairing in degree k: G on the value slot,
/// the induced metric of G^{-1} on the form slots.
Eigen::MatrixXd cochain_gram(const LieAlgebra& alg, int k);

/// <alpha, beta> with respect to cochain_gram.
double cochain_pairing(const LieAlgebra& alg, const Cochain& a, const Cochain& b);

/// Formal adjoint of d: d* = M_{k-1}^{-1} D_{k-1}^T M_k on degree-k cochains, k >= 1.
/// Throws DegenerateKilling.
Cochain codifferential(const LieAlgebra& alg, const Cochain& c);

/// Standard-normal components; draws n * binom(n, k) values from rng.
Cochain random_cochain(int n, int degree, std::mt19937_64& rng);

/// The six-term differentiated Jacobi expression
///   [w(X,Y), Z] + [w(Y,Z), X] + [w(Z,X), Y] + w([X,Y],Z) + w([Y,Z],X) + w([Z,X],Y)
/// maximised over basis triples.
double differentiated_jacobi_residual(const LieAlgebra& alg, const Cochain& omega);

}  // namespace liegauge
