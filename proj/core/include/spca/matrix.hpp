#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spca {

// Sorted, duplicate-free, 0-based index set (support sets J, J^c, ...).
using IndexSet = std::vector<std::size_t>;

// Dense row-major rectangular matrix. Used for eigenvector sets and for
// sub-block views such as M_{J^c,J}.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double> column(std::size_t j) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

// Dense symmetric d x d matrix. Entry (i,j) and (j,i) share one storage slot
// (packed lower triangle), so symmetry is bit-exact by construction. All
// entries are finite: every mutating entry point rejects NaN/Inf.
class SymMatrix {
 public:
  // Empty (dim 0) placeholder; every operation on it other than dim() and
  // assignment throws or is a no-op.
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0);

  static SymMatrix identity(std::size_t n);
  // Throws InvalidInput unless `a` is square, non-empty, finite and exactly
  // symmetric.
  static SymMatrix from_dense(const Matrix& a);
  // v v^T
  static SymMatrix outer(std::span<const double> v);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const { return packed_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value) { set(i, j, (*this)(i, j) + value); }

  // Packed lower triangle, row by row: (0,0), (1,0), (1,1), (2,0), ...
  std::span<const double> packed() const noexcept { return packed_; }
  std::span<double> packed() noexcept { return packed_; }

  Matrix to_dense() const;
  std::vector<double> diagonal() const;
  double trace() const;

  // M_{J,J}
  SymMatrix principal(const IndexSet& idx) const;
  // M_{R,C}
  Matrix block(const IndexSet& rows, const IndexSet& cols) const;

  std::vector<double> multiply(std::span<const double> x) const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double factor);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double f) { return a *= f; }
  friend SymMatrix operator*(double f, SymMatrix a) { return a *= f; }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  static std::size_t index(std::size_t i, std::size_t j) noexcept {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> packed_;
};

// Frobenius inner product <A, B>.
double inner(const SymMatrix& a, const SymMatrix& b);
double frobenius_norm(const SymMatrix& a);
double frobenius_distance(const SymMatrix& a, const SymMatrix& b);
// sum_{i,j} |A_ij|
double l11_norm(const SymMatrix& a);

// [0, d) minus `idx`.
IndexSet complement(const IndexSet& idx, std::size_t d);
// Throws InvalidInput unless sorted, unique and every entry < d.
void validate_index_set(const IndexSet& idx, std::size_t d);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace spca
