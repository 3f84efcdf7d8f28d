#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace liegauge {

/// Dense tensor of the given rank with every axis of length n, row-major.
template <std::size_t Rank>
class SquareTensor {
 public:
  SquareTensor() = default;
  explicit SquareTensor(int n) : n_(n), data_(ipow(n), 0.0) {}

  int dim() const { return n_; }

  template <typename... Idx>
  double& operator()(Idx... idx) {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... Idx>
  double operator()(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  SquareTensor& operator+=(const SquareTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  SquareTensor& operator-=(const SquareTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  SquareTensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend SquareTensor operator+(SquareTensor a, const SquareTensor& b) { return a += b; }
  friend SquareTensor operator-(SquareTensor a, const SquareTensor& b) { return a -= b; }
  friend SquareTensor operator*(double s, SquareTensor a) { return a *= s; }

 private:
  std::size_t ipow(int n) const {
    std::size_t s = 1;
    for (std::size_t r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return off;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// C(k, i, j) = C^k_{ij}: [b_i, b_j] = sum_k C^k_{ij} b_k. The output slot is first.
using StructureConstants = SquareTensor<3>;

}  // namespace liegauge
