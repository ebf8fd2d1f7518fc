#pragma once
// Reference implementations used only by the tests. None of them call into
// the library's numerics: matrices are plain nested vectors.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spca/matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

Dense to_dense(const spca::SymMatrix& m);
Dense to_dense(const spca::Matrix& m);
spca::SymMatrix to_sym(const Dense& a);

Dense zeros(std::size_t r, std::size_t c);
Dense transpose(const Dense& a);
Dense multiply(const Dense& a, const Dense& b);
Dense submatrix(const Dense& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);

// Seeded random symmetric matrix with N(0, 1) entries.
Dense random_symmetric(std::size_t d, std::mt19937_64& rng);
Dense random_rect(std::size_t r, std::size_t c, std::mt19937_64& rng);

// Cyclic Jacobi rotations until the off-diagonal mass is below 1e-15 of the
// Frobenius norm. Values descending, vectors in columns.
struct Eig {
  Vec values;
  Dense vectors;
};
Eig jacobi(const Dense& a);

// Largest singular value by power iteration on A^T A.
double power_spectral(const Dense& a, std::size_t iters = 5000);

// Simplex projection by bisection on the threshold.
Vec simplex_bisection(const Vec& v);

// Spectraplex projection assembled from jacobi + simplex_bisection.
Dense spectraplex(const Dense& s);

// Largest eigenvalue of a symmetric dense matrix via jacobi.
double lambda1(const Dense& a);

// Saddle-point (primal-dual) iteration for
//   max_{X in spectraplex} min_{|Z|_max <= 1} <M - rho Z, X>.
// `lower` is the objective of a feasible X; `upper` is lambda_1(M - rho Z)
// for a feasible Z; the optimum lies in [lower, upper].
struct SaddleResult {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
};
SaddleResult saddle_sdp(const Dense& m, double rho, std::size_t max_iter, double gap_tol);

// Second, loop-level implementation of every closed-form quantity of the
// recovery theory. Block sub-matrices are formed explicitly.
struct Theory {
  double lambda_bar = 0.0;
  double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0, r6 = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double sign_margin = 0.0, dual_margin = 0.0;
  double eig_lhs = 0.0, eig_f1 = 0.0, eig_f2 = 0.0;
  double success = 0.0;
  // Corollary 1 ratios.
  double c1_mu0 = 0.0, c1_cross = 0.0, c1_comp = 0.0, c1_prob = 0.0, c1_rho = 0.0;
  double rescaled = 0.0;
};
Theory theory(const Dense& m_star, const std::vector<std::size_t>& j, const Vec& u1, double p,
              double sigma2, double b, double rho, double c);

struct Cor2 {
  double a1 = 0.0, a2 = 0.0;
  double sign_ratio = 0.0, sign_ratio_p = 0.0, noise = 0.0, rho_lower = 0.0, rho_upper = 0.0;
  double gate_rhs = 0.0;
};
Cor2 corollary2(double lambda1, const Vec& u1, const std::vector<std::size_t>& j, std::size_t d, double p,
                double sigma2, double b, double rho);

}  // namespace oracle
