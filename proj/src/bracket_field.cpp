#include "liegauge/bracket_field.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "liegauge/errors.hpp"

namespace liegauge {
namespace {

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv[sv.size() - 1];
  return smallest > 0.0 ? sv[0] / smallest : std::numeric_limits<double>::infinity();
}

// Runs body(p) for p in [0, count); exceptions are rethrown for the lowest p.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t first) {
    for (std::size_t p = first; p < count; p += workers) {
      try {
        body(p);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<int> unit(int n, int axis, int delta) {
  std::vector<int> o(n, 0);
  o[axis] += delta;
  return o;
}

}  // namespace

FieldSample transport_bracket(const LieAlgebra& alg, const Eigen::MatrixXd& u) {
  const int n = alg.dim();
  if (u.rows() != n || u.cols() != n) throw std::invalid_argument("frame matrix has wrong shape");
  if (condition_number(u) > kFrameConditionLimit) throw ConditioningError("frame is singular or ill-conditioned");
  const Eigen::MatrixXd uinv = u.inverse();

  // W_m = uinv^T C_m uinv, then T_c = sum_m u(c, m) W_m.
  std::vector<Eigen::MatrixXd> w(n);
  for (int m = 0; m < n; ++m) {
    Eigen::MatrixXd cm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cm(i, j) = alg.constant(m, i, j);
    w[m] = uinv.transpose() * cm * uinv;
  }
  FieldSample s{StructureConstants(n), Eigen::MatrixXd(n, n), Eigen::MatrixXd()};
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        double x = 0.0;
        double y = 0.0;
        for (int m = 0; m < n; ++m) {
          x += u(c, m) * w[m](a, b);
          y += u(c, m) * w[m](b, a);
        }
        s.bracket(c, a, b) = 0.5 * (x - y);
        s.bracket(c, b, a) = -s.bracket(c, a, b);
      }

  const double scale = s.bracket.max_abs();
  if (jacobi_residual(s.bracket) > kPointJacobiTol * std::max(1.0, scale * scale))
    throw ConditioningError("transported bracket fails the Jacobi identity");

  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double g = 0.0;
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) g -= s.bracket(m, a, q) * s.bracket(q, b, m);
      s.metric(a, b) = g;
      s.metric(b, a) = g;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.metric);
  const Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  if (mags.minCoeff() == 0.0 || mags.maxCoeff() / mags.minCoeff() > kMetricConditionLimit)
    throw ConditioningError("Killing metric of the bracket field is degenerate or ill-conditioned");
  s.inverse_metric = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  s.inverse_metric = 0.5 * (s.inverse_metric + s.inverse_metric.transpose()).eval();
  return s;
}

PointStencil::PointStencil(const LieAlgebra& alg, const FrameField& frame, const Eigen::VectorXd& center,
                           double step)
    : n_(alg.dim()), step_(step), center_(center) {
  std::vector<std::vector<int>> offsets;
  offsets.emplace_back(n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int si : {-1, 1}) {
      offsets.push_back(unit(n_, i, si));
      for (int j = i; j < n_; ++j)
        for (int sj : {-1, 1}) {
          auto o = unit(n_, i, si);
          o[j] += sj;
          if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; })) offsets.push_back(std::move(o));
        }
    }
  for (const auto& o : offsets) {
    const int k = key(o);
    if (samples_.contains(k)) continue;
    Eigen::VectorXd x = center_;
    for (int i = 0; i < n_; ++i) x[i] += step_ * o[i];
    samples_.emplace(k, transport_bracket(alg, frame(x)));
  }
}

int PointStencil::key(std::span<const int> offset) const {
  int k = 0;
  for (int v : offset) {
    if (v < -2 || v > 2) throw std::out_of_range("stencil offset beyond +-2h");
    k = 5 * k + (v + 2);
  }
  return k;
}

const FieldSample& PointStencil::at(std::span<const int> offset) const {
  auto it = samples_.find(key(offset));
  if (it == samples_.end()) throw std::out_of_range("offset not part of the stencil");
  return it->second;
}

const FieldSample& PointStencil::at_center() const {
  const std::vector<int> zero(n_, 0);
  return at(zero);
}

BracketField bracket_field_from_frame(const LieAlgebra& alg, const FrameField& frame, const Chart& chart,
                                      const FieldOptions& options) {
  if (chart.dim != alg.dim() || frame.dim() != alg.dim())
    throw std::invalid_argument("chart, frame and algebra dimensions differ");
  if (chart.radius > frame.radius_limit())
    throw ConditioningError("chart radius exceeds the safe region of the " + std::string(to_string(frame.kind())) +
                            " frame");
  BracketField field;
  field.step = chart.step;
  for (int p = 0; p < static_cast<int>(chart.samples.size()); ++p)
    if (chart.samples[p].cwiseAbs().maxCoeff() + 2.0 * chart.step <= chart.radius) field.point_ids.push_back(p);

  std::vector<std::optional<PointStencil>> built(field.point_ids.size());
  parallel_for(built.size(), options.threads, [&](std::size_t q) {
    built[q].emplace(alg, frame, chart.samples[field.point_ids[q]], chart.step);
  });
  field.stencils.reserve(built.size());
  for (auto& s : built) field.stencils.push_back(std::move(*s));
  return field;
}

SquareTensor<3> metric_derivative(const PointStencil& s, std::span<const int> offset) {
  const int n = s.dim();
  SquareTensor<3> dg(n);
  std::vector<int> plus(offset.begin(), offset.end());
  std::vector<int> minus = plus;
  for (int k = 0; k < n; ++k) {
    plus[k] += 1;
    minus[k] -= 1;
    const Eigen::MatrixXd diff = (s.at(plus).metric - s.at(minus).metric) / (2.0 * s.step());
    plus[k] -= 1;
    minus[k] += 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(k, i, j) = diff(i, j);
  }
  return dg;
}

SquareTensor<3> christoffel(const PointStencil& s, std::span<const int> offset) {
  const int n = s.dim();
  const SquareTensor<3> dg = metric_derivative(s, offset);
  const Eigen::MatrixXd& ginv = s.at(offset).inverse_metric;
  SquareTensor<3> gamma(n);
  std::vector<double> lowered(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int l = 0; l < n; ++l) lowered[l] = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += ginv(k, l) * lowered[l];
        gamma(k, i, j) = 0.5 * v;
        gamma(k, j, i) = 0.5 * v;
      }
    }
  return gamma;
}

SquareTensor<3> christoffel(const PointStencil& s) {
  const std::vector<int> zero(s.dim(), 0);
  return christoffel(s, zero);
}

SquareTensor<4> covariant_derivative(const PointStencil& s, const SquareTensor<3>& gamma) {
  const int n = s.dim();
  const StructureConstants& t = s.at_center().bracket;
  SquareTensor<4> dt(n);
  for (int i = 0; i < n; ++i) {
    const StructureConstants& tp = s.at(unit(n, i, 1)).bracket;
    const StructureConstants& tm = s.at(unit(n, i, -1)).bracket;
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = (tp(c, a, b) - tm(c, a, b)) / (2.0 * s.step());
          for (int m = 0; m < n; ++m)
            v += gamma(c, i, m) * t(m, a, b) - gamma(m, i, a) * t(c, m, b) - gamma(m, i, b) * t(c, a, m);
          dt(i, c, a, b) = v;
        }
  }
  return dt;
}

SquareTensor<4> exterior_covariant_derivative(const SquareTensor<4>& dt) {
  const int n = dt.dim();
  SquareTensor<4> out(n);
  for (int c = 0; c < n; ++c)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) out(c, x, y, z) = dt(x, c, y, z) + dt(y, c, z, x) + dt(z, c, x, y);
  return out;
}

SquareTensor<3> gauge_field(const FieldSample& at, const SquareTensor<4>& dt) {
  const int n = dt.dim();
  const StructureConstants& t = at.bracket;
  SquareTensor<3> a(n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b) {
      // v^m_k = sum_l G^{kl} (D_i T)^m_{bl}
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) v(m, k) += at.inverse_metric(k, l) * dt(i, m, b, l);
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) s += t(c, k, m) * v(m, k);
        a(i, c, b) = s;
      }
    }
  return a;
}

SquareTensor<3> torsion(const SquareTensor<3>& gauge) {
  const int n = gauge.dim();
  SquareTensor<3> tau(n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tau(c, i, j) = gauge(i, c, j) - gauge(j, c, i);
  return tau;
}

SquareTensor<4> nabla_residual(const FieldSample& at, const SquareTensor<4>& dt, const SquareTensor<3>& gauge) {
  const int n = dt.dim();
  const StructureConstants& t = at.bracket;
  SquareTensor<4> r(n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = dt(i, c, a, b);
          for (int m = 0; m < n; ++m)
            v += gauge(i, c, m) * t(m, a, b) - gauge(i, m, a) * t(c, m, b) - gauge(i, m, b) * t(c, a, m);
          r(i, c, a, b) = v;
        }
  return r;
}

SquareTensor<3> metric_skewness(const FieldSample& at, const SquareTensor<3>& gauge) {
  const int n = gauge.dim();
  SquareTensor<3> skew(n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        double v = 0.0;
        for (int m = 0; m < n; ++m) v += at.metric(c, m) * gauge(i, m, b) + at.metric(b, m) * gauge(i, m, c);
        skew(i, c, b) = v;
      }
  return skew;
}

SquareTensor<4> riemann(const PointStencil& s) {
  const int n = s.dim();
  const SquareTensor<3> gamma = christoffel(s);
  std::vector<SquareTensor<3>> dgamma;  // d_i Gamma, central differences of Gamma at +-h e_i
  dgamma.reserve(n);
  for (int i = 0; i < n; ++i) {
    SquareTensor<3> d = christoffel(s, unit(n, i, 1)) - christoffel(s, unit(n, i, -1));
    d *= 1.0 / (2.0 * s.step());
    dgamma.push_back(std::move(d));
  }
  SquareTensor<4> r(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
          double q = 0.0;
          for (int m = 0; m < n; ++m) q += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          r(l, k, i, j) = v + q;
        }
  return r;
}

std::vector<SquareTensor<3>> christoffel_field(const BracketField& field) {
  std::vector<SquareTensor<3>> out;
  for (const auto& s : field.stencils) out.push_back(christoffel(s));
  return out;
}

std::vector<SquareTensor<4>> covariant_derivative_T(const BracketField& field) {
  std::vector<SquareTensor<4>> out;
  for (const auto& s : field.stencils) out.push_back(covariant_derivative(s, christoffel(s)));
  return out;
}

std::vector<SquareTensor<4>> dD_T(const BracketField& field) {
  std::vector<SquareTensor<4>> out;
  for (const auto& dt : covariant_derivative_T(field)) out.push_back(exterior_covariant_derivative(dt));
  return out;
}

std::vector<SquareTensor<3>> gauge_field_A(const BracketField& field) {
  std::vector<SquareTensor<3>> out;
  for (const auto& s : field.stencils) out.push_back(gauge_field(s.at_center(), covariant_derivative(s, christoffel(s))));
  return out;
}

std::vector<SquareTensor<3>> torsion_field(const BracketField& field) {
  std::vector<SquareTensor<3>> out;
  for (const auto& a : gauge_field_A(field)) out.push_back(torsion(a));
  return out;
}

std::vector<SquareTensor<4>> curvature_field(const BracketField& field) {
  std::vector<SquareTensor<4>> out;
  for (const auto& s : field.stencils) out.push_back(riemann(s));
  return out;
}

DiagnosticsReport residual_report(const BracketField& field, const FieldOptions& options) {
  DiagnosticsReport report;
  report.step = field.step;
  report.points.resize(field.stencils.size());
  parallel_for(field.stencils.size(), options.threads, [&](std::size_t p) {
    const PointStencil& s = field.stencils[p];
    const FieldSample& at = s.at_center();
    const SquareTensor<4> dt = covariant_derivative(s, christoffel(s));
    const SquareTensor<3> a = gauge_field(at, dt);
    PointDiagnostics& d = report.points[p];
    d.point_id = field.point_ids[p];
    d.x = s.center();
    d.norms.dt = dt.max_abs();
    d.norms.ddt = exterior_covariant_derivative(dt).max_abs();
    d.norms.gauge = a.max_abs();
    d.norms.tau = torsion(a).max_abs();
    d.norms.nabla_residual = nabla_residual(at, dt, a).max_abs();
    d.norms.metric_skew = metric_skewness(at, a).max_abs();
    d.norms.riemann = riemann(s).max_abs();
  });
  for (const auto& d : report.points) {
    auto& m = report.max;
    m.tau = std::max(m.tau, d.norms.tau);
    m.gauge = std::max(m.gauge, d.norms.gauge);
    m.dt = std::max(m.dt, d.norms.dt);
    m.ddt = std::max(m.ddt, d.norms.ddt);
    m.nabla_residual = std::max(m.nabla_residual, d.norms.nabla_residual);
    m.metric_skew = std::max(m.metric_skew, d.norms.metric_skew);
    m.riemann = std::max(m.riemann, d.norms.riemann);
  }
  return report;
}

}  // namespace liegauge
