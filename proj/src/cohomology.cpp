#include "liegauge/cohomology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "liegauge/errors.hpp"

namespace liegauge {
namespace {

void enumerate(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    enumerate(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Sorts in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

Eigen::MatrixXd inverse_killing(const LieAlgebra& alg) {
  return inverse_metric(killing_metric(alg));
}

void check_semisimple(const LieAlgebra& alg, const char* what) {
  if (!classify(alg).semisimple)
    throw DegenerateKilling(std::string(what) + " requires a semisimple algebra; '" + alg.name() +
                            "' has a degenerate Killing metric");
}

}  // namespace

SubsetIndex::SubsetIndex(int n, int k) : n_(n), k_(k) {
  std::vector<int> cur;
  enumerate(n, k, 0, cur, subsets_);
}

int SubsetIndex::find(std::span<const int> ascending) const {
  auto it = std::lower_bound(subsets_.begin(), subsets_.end(), ascending,
                             [](const std::vector<int>& a, std::span<const int> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                             });
  if (it == subsets_.end() || !std::equal(it->begin(), it->end(), ascending.begin(), ascending.end())) return -1;
  return static_cast<int>(it - subsets_.begin());
}

Cochain::Cochain(int n, int degree)
    : n_(n), degree_(degree), index_(n, degree), flat_(Eigen::VectorXd::Zero(n * index_.size())) {
  if (degree < 0 || degree > kMaxCochainDegree) throw std::invalid_argument("cochain degree out of range");
}

Cochain::Cochain(int n, int degree, Eigen::VectorXd flat) : Cochain(n, degree) {
  if (flat.size() != flat_.size()) throw std::invalid_argument("cochain: flat vector has wrong length");
  flat_ = std::move(flat);
}

double Cochain::get(int c, std::span<const int> indices) const {
  std::vector<int> idx(indices.begin(), indices.end());
  const int sign = sort_with_sign(idx);
  if (sign == 0) return 0.0;
  return sign * flat_[c + n_ * index_.find(idx)];
}

void Cochain::set(int c, std::span<const int> indices, double value) {
  std::vector<int> idx(indices.begin(), indices.end());
  const int sign = sort_with_sign(idx);
  if (sign == 0) throw std::invalid_argument("cochain: repeated form index");
  flat_[c + n_ * index_.find(idx)] = sign * value;
}

Eigen::MatrixXd Cochain::as_matrix() const {
  if (degree_ != 1) throw std::invalid_argument("as_matrix needs a degree-1 cochain");
  return Eigen::Map<const Eigen::MatrixXd>(flat_.data(), n_, n_);
}

Cochain Cochain::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_matrix needs a square matrix");
  const int n = static_cast<int>(m.rows());
  return Cochain(n, 1, Eigen::Map<const Eigen::VectorXd>(m.data(), n * n));
}

Cochain coboundary(const LieAlgebra& alg, const Cochain& w) {
  const int n = alg.dim();
  const int k = w.degree();
  if (w.dim() != n) throw std::invalid_argument("coboundary: cochain dimension mismatch");
  if (k >= kMaxCochainDegree) throw std::invalid_argument("coboundary: degree 3 is the top of the complex");

  Cochain out(n, k + 1);
  const SubsetIndex outputs(n, k + 1);
  std::vector<int> rest;
  rest.reserve(k);
  for (int s = 0; s < outputs.size(); ++s) {
    const auto& args = outputs.subset(s);
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      // sum_i (-1)^i [X_i, w(..^X_i..)]
      for (int i = 0; i <= k; ++i) {
        rest.clear();
        for (int p = 0; p <= k; ++p)
          if (p != i) rest.push_back(args[p]);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < n; ++m) {
          const double cc = alg.constant(c, args[i], m);
          if (cc != 0.0) v += sign * cc * w.get(m, rest);
        }
      }
      // sum_{i<j} (-1)^{i+j} w([X_i, X_j], ..^X_i..^X_j..)
      for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
          const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
          for (int m = 0; m < n; ++m) {
            const double cc = alg.constant(m, args[i], args[j]);
            if (cc == 0.0) continue;
            rest.assign(1, m);
            for (int p = 0; p <= k; ++p)
              if (p != i && p != j) rest.push_back(args[p]);
            v += sign * cc * w.get(c, rest);
          }
        }
      out.flat()[c + n * s] = v;
    }
  }
  return out;
}

Eigen::MatrixXd coboundary_matrix(const LieAlgebra& alg, int k) {
  if (k < 0 || k >= kMaxCochainDegree) throw std::invalid_argument("coboundary_matrix: k must be 0, 1 or 2");
  const int n = alg.dim();
  Cochain basis(n, k);
  const auto cols = basis.flat().size();
  Eigen::MatrixXd m(n * SubsetIndex(n, k + 1).size(), cols);
  for (Eigen::Index col = 0; col < cols; ++col) {
    basis.flat().setZero();
    basis.flat()[col] = 1.0;
    m.col(col) = coboundary(alg, basis).flat();
  }
  return m;
}

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankTol * sv[0]) ++r;
  return r;
}

CohomologyDims cohomology_dims(const LieAlgebra& alg) {
  int rank[3];
  int cols[3];
  for (int k = 0; k < 3; ++k) {
    const Eigen::MatrixXd d = coboundary_matrix(alg, k);
    rank[k] = numerical_rank(d);
    cols[k] = static_cast<int>(d.cols());
  }
  return {cols[0] - rank[0], cols[1] - rank[1] - rank[0], cols[2] - rank[2] - rank[1]};
}

Cochain homotopy(const LieAlgebra& alg, const Cochain& omega) {
  if (omega.degree() != 2 || omega.dim() != alg.dim())
    throw std::invalid_argument("homotopy: expects a degree-2 cochain of matching dimension");
  check_semisimple(alg, "homotopy");
  const int n = alg.dim();
  const Eigen::MatrixXd ginv = inverse_killing(alg);
  Cochain a(n, 1);
  int pair[2];
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      for (int b = 0; b < n; ++b) {
        pair[0] = x;
        pair[1] = b;
        for (int m = 0; m < n; ++m) {
          const double wm = omega.get(m, pair);
          if (wm == 0.0) continue;
          for (int aa = 0; aa < n; ++aa) v += ginv(aa, b) * alg.constant(c, aa, m) * wm;
        }
      }
      a.flat()[c + n * x] = kHomotopySign * v;
    }
  return a;
}

Eigen::MatrixXd cochain_gram(const LieAlgebra& alg, int k) {
  const int n = alg.dim();
  const KillingMetric km = killing_metric(alg);
  const Eigen::MatrixXd ginv = inverse_metric(km);
  const SubsetIndex sub(n, k);
  const int m = sub.size();
  Eigen::MatrixXd minors(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) {
      if (k == 0) {
        minors(s, t) = 1.0;
        continue;
      }
      Eigen::MatrixXd block(k, k);
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) block(p, q) = ginv(sub.subset(s)[p], sub.subset(t)[q]);
      minors(s, t) = block.determinant();
    }
  Eigen::MatrixXd gram(n * m, n * m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) gram.block(n * s, n * t, n, n) = minors(s, t) * km.gram;
  return gram;
}

double cochain_pairing(const LieAlgebra& alg, const Cochain& a, const Cochain& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("cochain_pairing: degree mismatch");
  check_semisimple(alg, "cochain pairing");
  return a.flat().dot(cochain_gram(alg, a.degree()) * b.flat());
}

Cochain codifferential(const LieAlgebra& alg, const Cochain& c) {
  const int k = c.degree();
  if (k < 1) throw std::invalid_argument("codifferential: degree must be at least 1");
  check_semisimple(alg, "codifferential");
  const Eigen::MatrixXd d = coboundary_matrix(alg, k - 1);
  const Eigen::MatrixXd lower = cochain_gram(alg, k - 1);
  const Eigen::MatrixXd upper = cochain_gram(alg, k);
  Eigen::VectorXd v = lower.partialPivLu().solve(d.transpose() * (upper * c.flat()));
  return Cochain(alg.dim(), k - 1, std::move(v));
}

Cochain random_cochain(int n, int degree, std::mt19937_64& rng) {
  Cochain c(n, degree);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < c.flat().size(); ++i) c.flat()[i] = normal(rng);
  return c;
}

double differentiated_jacobi_residual(const LieAlgebra& alg, const Cochain& w) {
  if (w.degree() != 2) throw std::invalid_argument("differentiated_jacobi_residual: degree-2 cochain expected");
  const int n = alg.dim();
  double worst = 0.0;
  auto bracket_w_then = [&](int l, int x, int y, int z) {
    // [w(x,y), b_z]^l
    const int xy[2] = {x, y};
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += w.get(m, xy) * alg.constant(l, m, z);
    return s;
  };
  auto w_of_bracket = [&](int l, int x, int y, int z) {
    // w([x,y], z)^l
    double s = 0.0;
    for (int m = 0; m < n; ++m) {
      const double cc = alg.constant(m, x, y);
      if (cc == 0.0) continue;
      const int mz[2] = {m, z};
      s += cc * w.get(l, mz);
    }
    return s;
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int l = 0; l < n; ++l) {
          const double v = bracket_w_then(l, x, y, z) + bracket_w_then(l, y, z, x) + bracket_w_then(l, z, x, y) +
                           w_of_bracket(l, x, y, z) + w_of_bracket(l, y, z, x) + w_of_bracket(l, z, x, y);
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

}  // namespace liegauge
