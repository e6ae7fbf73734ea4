#pragma once

#include <complex>
#include <span>
#include <vector>

namespace twomode {

using cplx = std::complex<double>;

// Square dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

  static CMatrix identity(int n);

  int size() const { return n_; }
  cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

  std::span<cplx> row(int i) { return {data_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)}; }
  std::span<const cplx> row(int i) const {
    return {data_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)};
  }

  std::vector<cplx> column(int j) const;
  std::vector<cplx> apply(std::span<const cplx> x) const;
  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix adjoint() const;
  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(cplx s);

  double max_abs() const;
  double max_abs_diff(const CMatrix& other) const;

 private:
  int n_ = 0;
  std::vector<cplx> data_;
};

// <a|b>, conjugate-linear in a.
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> a);

}  // namespace twomode
