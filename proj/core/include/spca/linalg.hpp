#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

struct EigOptions {
  // Relative accuracy target; also the tolerance used by the invariant
  // checks (residual <= tol * ||A||_F, |V^T V - I| <= tol).
  double tol = 1e-10;
  // Total implicit-QL iterations allowed, as a multiple of the dimension.
  std::size_t sweeps_per_dim = 30;
};

// Eigenvalues sorted descending; column k of `vectors` pairs with values[k].
// In each eigenvector the first entry of largest magnitude is nonnegative.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;

  std::vector<double> vector(std::size_t k) const { return vectors.column(k); }
};

// Householder tridiagonalization followed by implicit-shift QL.
// Throws InvalidInput for an empty matrix, NoConvergence when the iteration
// cap is exhausted.
EigenDecomposition sym_eig(const SymMatrix& a, const EigOptions& opts = {});

// Eigenvalues only (descending); skips all eigenvector work.
std::vector<double> sym_eigenvalues(const SymMatrix& a, const EigOptions& opts = {});

// All eigenvalues (descending) but only the leading k eigenvectors, where
// k = select(values). Uses inverse iteration on the tridiagonal form and
// falls back to sym_eig when its residual checks fail.
EigenDecomposition sym_eig_leading(const SymMatrix& a,
                                   const std::function<std::size_t(std::span<const double>)>& select,
                                   const EigOptions& opts = {});

double lambda_max(const SymMatrix& a);
double lambda_min(const SymMatrix& a);

// Max over k of ||A v_k - lambda_k v_k||_2 and max |(V^T V - I)_ij|.
struct EigResiduals {
  double max_residual = 0.0;
  double orthogonality = 0.0;
};
EigResiduals eig_residuals(const SymMatrix& a, const EigenDecomposition& eig);

// V diag(w) V^T, skipping zero weights. Weights past the last column of V
// must be zero.
SymMatrix recompose(const Matrix& vectors, std::span<const double> weights);

// The matrix norms used throughout the recovery conditions. For an r x c
// matrix A with columns A_{:,j}:
//   two_inf = max_j ||A_{:,j}||_2        one_inf = max_j ||A_{:,j}||_1
//   inf_two = sqrt(sum_j (max_i |A_ij|)^2)
struct NormReport {
  double spectral = 0.0;
  double frobenius = 0.0;
  double l11 = 0.0;
  double max = 0.0;
  double two_inf = 0.0;
  double one_inf = 0.0;
  double inf_two = 0.0;
};

NormReport norms(const Matrix& a);
NormReport norms(const SymMatrix& a);

// Euclidean projection onto {w : w >= 0, sum w = 1}; sort based.
std::vector<double> project_simplex(std::span<const double> v);

// Frobenius projection onto the spectraplex {X = X^T, X >= 0, tr X = 1}.
SymMatrix project_spectraplex(const SymMatrix& s);

// Entrywise sign(a) * max(|a| - t, 0). Throws InvalidInput for t < 0.
SymMatrix soft_threshold(const SymMatrix& a, double t);

}  // namespace spca
