#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "liegauge/lie_algebra.hpp"

namespace liegauge {

enum class FrameKind { identity, exp_chart, random_smooth, scaled, custom };

FrameKind parse_frame_kind(std::string_view name);
std::string_view to_string(FrameKind kind);

struct FrameParams {
  std::uint64_t seed = 7;
  /// random_smooth: entry scale of the generators S_i. scaled: the factor lambda.
  double scale = 0.5;
};

inline constexpr double kFrameConditionLimit = 1e6;
inline constexpr double kMetricConditionLimit = 1e8;

/// Moving frame u(x): g -> T_x M in chart coordinates. Column a of u(x) is the
/// coordinate vector of u(x) b_a.
class FrameField {
 public:
  using Evaluator = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  FrameField(FrameKind kind, int n, Evaluator eval, double radius_limit);

  FrameKind kind() const { return kind_; }
  int dim() const { return n_; }
  /// Largest admissible chart radius (infinite unless the frame is a series).
  double radius_limit() const { return radius_limit_; }

  Eigen::MatrixXd operator()(const Eigen::VectorXd& x) const { return eval_(x); }

 private:
  FrameKind kind_;
  int n_;
  Evaluator eval_;
  double radius_limit_;
};

/// identity: u = I. exp_chart: u(x) = phi(ad_x)^{-1}, phi(z) = (1 - e^{-z}) / z,
/// the left-invariant frame in exponential coordinates. random_smooth:
/// u(x) = exp(sum_i x_i S_i) with seeded S_i kept away from Der(g).
/// scaled: u = scale * I.
/// Throws DegenerateKilling for exp_chart on a non-semisimple algebra.
FrameField frame_field(const LieAlgebra& alg, FrameKind kind, const FrameParams& params = {});

/// Wraps an arbitrary evaluator (tests and experiments).
FrameField custom_frame(int n, FrameField::Evaluator eval);

/// max_i ||ad_{b_i}||_2.
double ad_spectral_radius(const LieAlgebra& alg);
/// 0.4 / max_i ||ad_{b_i}||_2.
double exp_chart_default_radius(const LieAlgebra& alg);

/// phi(ad_x) = sum_{m>=0} (-ad_x)^m / (m+1)!, truncated once a term has norm < 1e-14 (at most 30 terms).
Eigen::MatrixXd dexp_series(const Eigen::MatrixXd& adx);

/// Distance (Frobenius) from s to the derivation algebra of alg.
double distance_to_derivations(const LieAlgebra& alg, const Eigen::MatrixXd& s);

/// Sampled coordinate chart: the domain is the sup-norm ball of radius `radius`.
struct Chart {
  int dim = 0;
  double step = 0.0;
  double radius = 0.0;
  std::vector<Eigen::VectorXd> samples;
};

/// Validates h > 0, h * n < r and sample dimensions.
Chart make_chart(int n, double step, double radius, std::vector<Eigen::VectorXd> samples);

/// `count` points uniform in the sup-norm ball of radius `half_width`.
std::vector<Eigen::VectorXd> sample_points(int n, double half_width, int count, std::uint64_t seed);

}  // namespace liegauge
