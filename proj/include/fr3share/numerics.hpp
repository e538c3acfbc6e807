#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fr3share {

using cplx = std::complex<double>;

/// Dense complex matrix stored row-major. Column vectors are N x 1 matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix column(std::span<const cplx> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  /// Flat access; convenient for column vectors.
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix col(std::size_t c) const;
  void set_col(std::size_t c, const ComplexMatrix& v);

  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// a^H b for two column vectors of equal length.
cplx inner(const ComplexMatrix& a, const ComplexMatrix& b);
/// a b^H for two column vectors.
ComplexMatrix outer(const ComplexMatrix& a, const ComplexMatrix& b);
/// Scaled copy with unit Frobenius norm. Zero input is returned unchanged.
ComplexMatrix normalized(const ComplexMatrix& a);

/// Rotates column c of `m` so its largest-magnitude entry is real and
/// positive. Ties resolve to the lowest row index.
void fix_column_phase(ComplexMatrix& m, std::size_t c);

struct SvdResult {
  ComplexMatrix u;        ///< rows x k, orthonormal columns
  std::vector<double> s;  ///< k = min(rows, cols), descending
  ComplexMatrix v;        ///< cols x k, orthonormal columns
};

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
SvdResult svd(const ComplexMatrix& a);

struct EigResult {
  ComplexMatrix q;             ///< unitary, eigenvectors in columns
  std::vector<double> values;  ///< descending
};

/// Hermitian eigendecomposition by cyclic Jacobi. The input is symmetrized
/// before iterating; it must be Hermitian within 1e-9 relative.
EigResult eig_hermitian(const ComplexMatrix& m);

}  // namespace fr3share
