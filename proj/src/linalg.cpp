#include "twomode/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace twomode {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<cplx> CMatrix::column(int j) const {
  std::vector<cplx> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<cplx> CMatrix::apply(std::span<const cplx> x) const {
  assert(static_cast<int>(x.size()) == n_);
  std::vector<cplx> out(n_);
  for (int i = 0; i < n_; ++i) {
    cplx acc = 0.0;
    auto r = row(i);
    for (int j = 0; j < n_; ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  assert(rhs.n_ == n_);
  CMatrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const cplx a = (*this)(i, k);
      if (a == cplx{}) continue;
      auto r = rhs.row(k);
      auto o = out.row(i);
      for (int j = 0; j < n_; ++j) o[j] += a * r[j];
    }
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  assert(rhs.n_ == n_);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
  assert(rhs.n_ == n_);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::max_abs_diff(const CMatrix& other) const {
  assert(other.n_ == n_);
  double m = 0.0;
  for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  cplx acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace twomode
