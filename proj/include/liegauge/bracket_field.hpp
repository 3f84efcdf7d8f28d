#pragma once

#include <Eigen/Dense>
#include <span>
#include <unordered_map>
#include <vector>

#include "liegauge/frame.hpp"
#include "liegauge/lie_algebra.hpp"
#include "liegauge/tensor.hpp"

namespace liegauge {

/// Pointwise Jacobi tolerance for frame-transported brackets (relative to |T|^2).
inline constexpr double kPointJacobiTol = 1e-10;

/// T, its Killing metric G and G^{-1} at one chart point.
struct FieldSample {
  StructureConstants bracket;  // T^c_{ab}
  Eigen::MatrixXd metric;      // G_{ab} = -sum T^m_{an} T^n_{bm}
  Eigen::MatrixXd inverse_metric;
};

/// T^c_{ab} = sum u^c_m C^m_{ij} (u^{-1})^i_a (u^{-1})^j_b for the frame matrix u.
/// Throws ConditioningError if u or the resulting metric is ill-conditioned or
/// the transported bracket fails Jacobi.
FieldSample transport_bracket(const LieAlgebra& alg, const Eigen::MatrixXd& frame);

/// Bracket field on the stencil {0, +-h e_i, +-h e_i +- h e_j} (including +-2h e_i)
/// around one sample point. Offsets are integer multiples of h.
class PointStencil {
 public:
  PointStencil(const LieAlgebra& alg, const FrameField& frame, const Eigen::VectorXd& center, double step);

  int dim() const { return n_; }
  double step() const { return step_; }
  const Eigen::VectorXd& center() const { return center_; }

  /// Sample at center + h * offset; offset entries in [-2, 2].
  const FieldSample& at(std::span<const int> offset) const;
  const FieldSample& at_center() const;
  std::size_t size() const { return samples_.size(); }

 private:
  int key(std::span<const int> offset) const;

  int n_;
  double step_;
  Eigen::VectorXd center_;
  std::unordered_map<int, FieldSample> samples_;
};

/// BracketField over a chart: stencils for every sample whose stencil stays in
/// the chart (||x||_inf + 2h <= r). point_ids index chart.samples.
struct BracketField {
  double step = 0.0;
  std::vector<int> point_ids;
  std::vector<PointStencil> stencils;
};

struct FieldOptions {
  /// Worker threads for per-point evaluation; results do not depend on this.
  int threads = 1;
};

BracketField bracket_field_from_frame(const LieAlgebra& alg, const FrameField& frame, const Chart& chart,
                                      const FieldOptions& options = {});

// Per-point differential quantities. Index orders:
//   dG(k,i,j) = d_k G_{ij}         Gamma(k,i,j) = Gamma^k_{ij}
//   DT(i,c,a,b) = (D_i T)^c_{ab}   dDT(c,x,y,z)  A(i,c,b) = A^c_{ib}
//   tau(c,i,j)                     skew(i,c,b) = G_{cm}A^m_{ib} + G_{bm}A^m_{ic}
//   R(l,k,i,j) = R^l_{kij}

/// Central difference of the metric at center + h * offset.
SquareTensor<3> metric_derivative(const PointStencil& s, std::span<const int> offset);
SquareTensor<3> christoffel(const PointStencil& s, std::span<const int> offset);
SquareTensor<3> christoffel(const PointStencil& s);
SquareTensor<4> covariant_derivative(const PointStencil& s, const SquareTensor<3>& gamma);
SquareTensor<4> exterior_covariant_derivative(const SquareTensor<4>& dt);
/// A^c_{ib} = sum G^{kl} T^c_{km} (D_i T)^m_{bl}.
SquareTensor<3> gauge_field(const FieldSample& at, const SquareTensor<4>& dt);
SquareTensor<3> torsion(const SquareTensor<3>& gauge);
SquareTensor<4> nabla_residual(const FieldSample& at, const SquareTensor<4>& dt, const SquareTensor<3>& gauge);
SquareTensor<3> metric_skewness(const FieldSample& at, const SquareTensor<3>& gauge);
SquareTensor<4> riemann(const PointStencil& s);

// Field-level forms, one entry per BracketField point.
std::vector<SquareTensor<3>> christoffel_field(const BracketField& field);
std::vector<SquareTensor<4>> covariant_derivative_T(const BracketField& field);
std::vector<SquareTensor<4>> dD_T(const BracketField& field);
std::vector<SquareTensor<3>> gauge_field_A(const BracketField& field);
std::vector<SquareTensor<3>> torsion_field(const BracketField& field);
std::vector<SquareTensor<4>> curvature_field(const BracketField& field);

/// Max-abs norms of one point's diagnostics.
struct DiagnosticNorms {
  double tau = 0.0;
  double gauge = 0.0;
  double dt = 0.0;
  double ddt = 0.0;
  double nabla_residual = 0.0;
  double metric_skew = 0.0;
  double riemann = 0.0;
};

struct PointDiagnostics {
  int point_id = 0;
  Eigen::VectorXd x;
  DiagnosticNorms norms;
};

struct DiagnosticsReport {
  double step = 0.0;
  std::vector<PointDiagnostics> points;
  DiagnosticNorms max;  // over reported points
};

DiagnosticsReport residual_report(const BracketField& field, const FieldOptions& options = {});

}  // namespace liegauge
