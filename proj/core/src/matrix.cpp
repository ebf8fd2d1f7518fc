#include "spca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spca/error.hpp"

namespace spca {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InvalidInput("matrix-vector product: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

SymMatrix::SymMatrix(std::size_t dim, double fill)
    : dim_(dim), packed_(dim * (dim + 1) / 2, fill) {
  if (!std::isfinite(fill)) throw InvalidInput("SymMatrix: non-finite fill value");
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.packed_[index(i, i)] = 1.0;
  return m;
}

SymMatrix SymMatrix::from_dense(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  if (a.empty()) throw InvalidInput("SymMatrix: empty matrix");
  const std::size_t n = a.rows();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = a(i, j);
      if (!std::isfinite(v))
        throw InvalidInput("SymMatrix: non-finite entry at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      if (v != a(j, i))
        throw InvalidInput("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                           ") and its transpose differ");
      m.packed_[index(i, j)] = v;
    }
  }
  return m;
}

SymMatrix SymMatrix::outer(std::span<const double> v) {
  SymMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) m.packed_[index(i, j)] = v[i] * v[j];
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value)) throw InvalidInput("SymMatrix: non-finite entry");
  packed_[index(i, j)] = value;
}

Matrix SymMatrix::to_dense() const {
  Matrix a(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = packed_[index(i, j)];
  return a;
}

std::vector<double> SymMatrix::diagonal() const {
  std::vector<double> d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) d[i] = packed_[index(i, i)];
  return d;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += packed_[index(i, i)];
  return t;
}

SymMatrix SymMatrix::principal(const IndexSet& idx) const {
  SymMatrix m(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) m.packed_[index(a, b)] = (*this)(idx[a], idx[b]);
  return m;
}

Matrix SymMatrix::block(const IndexSet& rows, const IndexSet& cols) const {
  Matrix m(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) m(a, b) = (*this)(rows[a], cols[b]);
  return m;
}

std::vector<double> SymMatrix::multiply(std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidInput("SymMatrix::multiply: dimension mismatch");
  std::vector<double> y(dim_, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < i; ++j, ++k) {
      y[i] += packed_[k] * x[j];
      y[j] += packed_[k] * x[i];
    }
    y[i] += packed_[k++] * x[i];
  }
  return y;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw InvalidInput("SymMatrix: dimension mismatch in +=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += other.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw InvalidInput("SymMatrix: dimension mismatch in -=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= other.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double factor) {
  if (!std::isfinite(factor)) throw InvalidInput("SymMatrix: non-finite scale factor");
  for (double& v : packed_) v *= factor;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("inner: dimension mismatch");
  const auto pa = a.packed();
  const auto pb = b.packed();
  double diag = 0.0;
  double off = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j, ++k) off += pa[k] * pb[k];
    diag += pa[k] * pb[k];
    ++k;
  }
  return diag + 2.0 * off;
}

double frobenius_norm(const SymMatrix& a) { return std::sqrt(inner(a, a)); }

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("frobenius_distance: dimension mismatch");
  const auto pa = a.packed();
  const auto pb = b.packed();
  double diag = 0.0;
  double off = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j, ++k) off += (pa[k] - pb[k]) * (pa[k] - pb[k]);
    diag += (pa[k] - pb[k]) * (pa[k] - pb[k]);
    ++k;
  }
  return std::sqrt(diag + 2.0 * off);
}

double l11_norm(const SymMatrix& a) {
  const auto pa = a.packed();
  double diag = 0.0;
  double off = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j, ++k) off += std::abs(pa[k]);
    diag += std::abs(pa[k]);
    ++k;
  }
  return diag + 2.0 * off;
}

IndexSet complement(const IndexSet& idx, std::size_t d) {
  IndexSet out;
  out.reserve(d > idx.size() ? d - idx.size() : 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (k < idx.size() && idx[k] == i) {
      ++k;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

void validate_index_set(const IndexSet& idx, std::size_t d) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= d)
      throw InvalidInput("index " + std::to_string(idx[k]) + " out of range for dimension " +
                         std::to_string(d));
    if (k > 0 && idx[k] <= idx[k - 1]) throw InvalidInput("index set must be sorted and unique");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace spca
