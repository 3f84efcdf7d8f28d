#include "liegauge/frame.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "liegauge/cohomology.hpp"
#include "liegauge/errors.hpp"

namespace liegauge {

FrameKind parse_frame_kind(std::string_view name) {
  if (name == "identity") return FrameKind::identity;
  if (name == "exp_chart") return FrameKind::exp_chart;
  if (name == "random_smooth") return FrameKind::random_smooth;
  if (name == "scaled") return FrameKind::scaled;
  throw std::invalid_argument("unknown frame kind '" + std::string(name) + "'");
}

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::identity: return "identity";
    case FrameKind::exp_chart: return "exp_chart";
    case FrameKind::random_smooth: return "random_smooth";
    case FrameKind::scaled: return "scaled";
    case FrameKind::custom: return "custom";
  }
  return "custom";
}

FrameField::FrameField(FrameKind kind, int n, Evaluator eval, double radius_limit)
    : kind_(kind), n_(n), eval_(std::move(eval)), radius_limit_(radius_limit) {}

double ad_spectral_radius(const LieAlgebra& alg) {
  double rho = 0.0;
  for (int i = 0; i < alg.dim(); ++i) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(alg.ad(i));
    rho = std::max(rho, svd.singularValues()[0]);
  }
  return rho;
}

double exp_chart_default_radius(const LieAlgebra& alg) {
  const double rho = ad_spectral_radius(alg);
  return rho > 0.0 ? 0.4 / rho : 0.4;
}

Eigen::MatrixXd dexp_series(const Eigen::MatrixXd& adx) {
  const auto n = adx.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // (-ad_x)^m / (m+1)!
  for (int m = 1; m < 30; ++m) {
    power = (-adx * power) / static_cast<double>(m + 1);
    sum += power;
    if (power.norm() < 1e-14) break;
  }
  return sum;
}

double distance_to_derivations(const LieAlgebra& alg, const Eigen::MatrixXd& s) {
  // Der(g) = ker of the degree-1 coboundary.
  const Eigen::MatrixXd d1 = coboundary_matrix(alg, 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d1, Eigen::ComputeFullV);
  const int rank = numerical_rank(d1);
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(svd.matrixV().cols() - rank);
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
  return (v - kernel * (kernel.transpose() * v)).norm();
}

FrameField frame_field(const LieAlgebra& alg, FrameKind kind, const FrameParams& params) {
  const int n = alg.dim();
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case FrameKind::identity:
      return FrameField(kind, n, [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n); }, inf);

    case FrameKind::scaled: {
      const double lambda = params.scale;
      if (lambda == 0.0) throw ConditioningError("scaled frame needs a nonzero factor");
      return FrameField(
          kind, n, [n, lambda](const Eigen::VectorXd&) { return lambda * Eigen::MatrixXd::Identity(n, n); }, inf);
    }

    case FrameKind::exp_chart: {
      if (!classify(alg).semisimple)
        throw DegenerateKilling("exp_chart frame requires a semisimple algebra");
      // ||ad_x||_2 <= n * rho * ||x||_inf must stay well inside the first
      // singularity of phi^{-1} at |z| = 2 pi.
      const double limit = std::numbers::pi / (n * ad_spectral_radius(alg));
      return FrameField(
          kind, n, [alg](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return dexp_series(alg.ad(x)).inverse(); },
          limit);
    }

    case FrameKind::random_smooth: {
      std::mt19937_64 rng(params.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<Eigen::MatrixXd> gens;
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd s(n, n);
        do {
          for (Eigen::Index e = 0; e < s.size(); ++e) s.data()[e] = params.scale * normal(rng);
        } while (distance_to_derivations(alg, s) < 1e-6);
        gens.push_back(std::move(s));
      }
      return FrameField(
          kind, n,
          [gens = std::move(gens), n](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) m += x[i] * gens[i];
            return m.exp();
          },
          inf);
    }

    case FrameKind::custom:
      break;
  }
  throw std::invalid_argument("frame_field: custom frames are built with custom_frame");
}

FrameField custom_frame(int n, FrameField::Evaluator eval) {
  return FrameField(FrameKind::custom, n, std::move(eval), std::numeric_limits<double>::infinity());
}

Chart make_chart(int n, double step, double radius, std::vector<Eigen::VectorXd> samples) {
  if (n <= 0) throw std::invalid_argument("chart: dimension must be positive");
  if (!(step > 0.0)) throw std::invalid_argument("chart: step must be positive");
  if (!(step * n < radius)) throw std::invalid_argument("chart: need step * dim < radius");
  for (const auto& x : samples)
    if (x.size() != n) throw std::invalid_argument("chart: sample point has wrong dimension");
  return Chart{n, step, radius, std::move(samples)};
}

std::vector<Eigen::VectorXd> sample_points(int n, double half_width, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  if (!(half_width > 0.0)) throw std::invalid_argument("sampling half-width must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-half_width, half_width);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = uni(rng);
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace liegauge
