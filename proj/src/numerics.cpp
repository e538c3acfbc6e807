#include "fr3share/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fr3share/errors.hpp"

namespace fr3share {

namespace {

constexpr int kMaxSweeps = 100;
// A column pair is rotated while its normalized inner product exceeds this.
constexpr double kSvdPairTol = 1e-15;
// Off-diagonal mass (relative to ||M||_F) at which the eigensolver stops
// early, and the level it must reach before it is considered converged.
constexpr double kEigStopTol = 1e-15;
constexpr double kEigConvergedTol = 1e-12;
constexpr double kHermitianTol = 1e-9;

using Column = std::vector<cplx>;

double squared_norm(const Column& v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return acc;
}

cplx dot(const Column& a, const Column& b) {
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

// Tangent of the Jacobi angle that annihilates the off-diagonal of the real
// symmetric 2x2 block [[a, g], [g, d]] with g > 0.
double jacobi_tangent(double a, double d, double g) {
  const double zeta = (d - a) / (2.0 * g);
  const double sign = zeta >= 0.0 ? 1.0 : -1.0;
  return sign / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
}

// Gram-Schmidt completion: returns a unit vector orthogonal to `basis`.
Column complete_orthonormal(const std::vector<Column>& basis, std::size_t dim) {
  for (std::size_t k = 0; k < dim; ++k) {
    Column cand(dim, cplx{0.0, 0.0});
    cand[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const cplx proj = dot(b, cand);
        for (std::size_t i = 0; i < dim; ++i) cand[i] -= proj * b[i];
      }
    }
    const double n = std::sqrt(squared_norm(cand));
    if (n > 0.5) {
      for (auto& x : cand) x /= n;
      return cand;
    }
  }
  throw Error(ErrorCode::InvalidDimension, "cannot complete orthonormal basis");
}

// One-sided Jacobi for rows >= cols.
SvdResult svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  std::vector<Column> w(n, Column(m));
  std::vector<Column> v(n, Column(n, cplx{0.0, 0.0}));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = squared_norm(w[i]);
        const double beta = squared_norm(w[j]);
        const cplx gamma = dot(w[i], w[j]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kSvdPairTol * std::sqrt(alpha * beta)) continue;
        converged = false;

        const cplx unphase = std::conj(gamma / g);
        const double t = jacobi_tangent(alpha, beta, g);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const cplx xi = w[i][k];
          const cplx xj = w[j][k] * unphase;
          w[i][k] = c * xi - s * xj;
          w[j][k] = s * xi + c * xj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx xi = v[i][k];
          const cplx xj = v[j][k] * unphase;
          v[i][k] = c * xi - s * xj;
          v[j][k] = s * xi + c * xj;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorCode::ConvergenceFailure, "svd did not converge in 100 sweeps");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(squared_norm(w[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double sigma_max = sigma[order.front()];
  SvdResult out{ComplexMatrix(m, n), std::vector<double>(n), ComplexMatrix(n, n)};
  std::vector<Column> u_cols;
  u_cols.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order[r];
    out.s[r] = sigma[j];
    Column u(m);
    if (sigma[j] > 1e-14 * sigma_max && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) u[i] = w[j][i] / sigma[j];
    } else {
      u = complete_orthonormal(u_cols, m);
    }
    for (std::size_t i = 0; i < m; ++i) out.u(i, r) = u[i];
    for (std::size_t i = 0; i < n; ++i) out.v(i, r) = v[j][i];
    u_cols.push_back(std::move(u));
  }
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidDimension, "entry count does not match rows x cols");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> values) {
  return ComplexMatrix(values.size(), 1, std::vector<cplx>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::col(std::size_t c) const {
  ComplexMatrix out(rows_, 1);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_col(std::size_t c, const ComplexMatrix& v) {
  if (v.size() != rows_) throw Error(ErrorCode::InvalidDimension, "set_col length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

double ComplexMatrix::frobenius_norm() const {
  // Scaled accumulation keeps tiny path-loss amplitudes (~1e-9) exact.
  double scale = 0.0;
  for (const auto& x : data_) scale = std::max({scale, std::abs(x.real()), std::abs(x.imag())});
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (const auto& x : data_) acc += std::norm(x / scale);
  return scale * std::sqrt(acc);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw Error(ErrorCode::InvalidDimension, "operator+ shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw Error(ErrorCode::InvalidDimension, "operator- shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidDimension, "matrix product shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidDimension, "inner product length mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

ComplexMatrix outer(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

ComplexMatrix normalized(const ComplexMatrix& a) {
  const double n = a.frobenius_norm();
  if (n == 0.0) return a;
  ComplexMatrix out = a;
  out *= 1.0 / n;
  return out;
}

void fix_column_phase(ComplexMatrix& m, std::size_t c) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double mag = std::abs(m(r, c));
    // Relative slack so near-ties do not flip with rounding noise.
    if (mag > best_mag * (1.0 + 1e-12)) {
      best_mag = mag;
      best = r;
    }
  }
  if (best_mag <= 0.0) return;
  const cplx rot = std::conj(m(best, c)) / best_mag;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= rot;
  m(best, c) = best_mag;
}

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw Error(ErrorCode::InvalidDimension, "svd of empty matrix");
  if (!a.all_finite()) throw Error(ErrorCode::InvalidArgument, "svd input has non-finite entries");

  SvdResult out;
  if (a.rows() >= a.cols()) {
    out = svd_tall(a);
  } else {
    // A^H = U' S V'^H  =>  A = V' S U'^H
    SvdResult t = svd_tall(a.adjoint());
    out = SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
  }

  // Phase convention on the left vectors; the right vectors follow so the
  // factorization is unchanged.
  for (std::size_t c = 0; c < out.u.cols(); ++c) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t r = 0; r < out.u.rows(); ++r) {
      const double mag = std::abs(out.u(r, c));
      if (mag > best_mag * (1.0 + 1e-12)) {
        best_mag = mag;
        best = r;
      }
    }
    if (best_mag <= 0.0) continue;
    const cplx rot = std::conj(out.u(best, c)) / best_mag;
    for (std::size_t r = 0; r < out.u.rows(); ++r) out.u(r, c) *= rot;
    out.u(best, c) = best_mag;
    for (std::size_t r = 0; r < out.v.rows(); ++r) out.v(r, c) *= rot;
  }
  return out;
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidDimension, "eig_hermitian needs a square matrix");
  if (m.rows() == 0) throw Error(ErrorCode::InvalidDimension, "eig_hermitian of empty matrix");
  if (!m.all_finite()) throw Error(ErrorCode::InvalidArgument, "eig_hermitian input has non-finite entries");

  const std::size_t n = m.rows();
  const double norm = m.frobenius_norm();
  if ((m - m.adjoint()).frobenius_norm() > kHermitianTol * norm) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  }

  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx x = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(i, j) = x;
      a(j, i) = std::conj(x);
    }
  }
  ComplexMatrix q = ComplexMatrix::identity(n);

  auto off_mass = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * std::norm(a(i, j));
    return std::sqrt(acc);
  };

  double off = off_mass();
  for (int sweep = 0; sweep < kMaxSweeps && off > kEigStopTol * norm; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const cplx b = a(p, r);
        const double g = std::abs(b);
        if (g <= 1e-18 * norm) continue;

        const cplx ph = b / g;
        const cplx cph = std::conj(ph);
        const double t = jacobi_tangent(a(p, p).real(), a(r, r).real(), g);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const double app = a(p, p).real() - t * g;
        const double arr = a(r, r).real() + t * g;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = a(k, p);
          const cplx y = a(k, r);
          a(k, p) = c * x - s * cph * y;
          a(k, r) = s * x + c * cph * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = a(p, k);
          const cplx y = a(r, k);
          a(p, k) = c * x - s * ph * y;
          a(r, k) = s * x + c * ph * y;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        a(p, p) = app;
        a(r, r) = arr;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx x = q(k, p);
          const cplx y = q(k, r);
          q(k, p) = c * x - s * cph * y;
          q(k, r) = s * x + c * cph * y;
        }
      }
    }
    off = off_mass();
  }
  if (off > kEigConvergedTol * norm) {
    throw Error(ErrorCode::ConvergenceFailure, "eig_hermitian did not converge in 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  EigResult out{ComplexMatrix(n, n), std::vector<double>(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.q(r, c) = q(r, order[c]);
    fix_column_phase(out.q, c);
  }
  return out;
}

}  // namespace fr3share
