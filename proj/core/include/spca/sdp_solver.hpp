#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

struct SdpConfig {
  double rho = 0.0;
  double tau = 1.0;  // ADMM penalty
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  std::size_t max_iter = 20000;
  double eta_support = 1e-3;
  bool residual_balancing = true;

  // Throws InvalidInput on out-of-range fields.
  void validate() const;
};

struct SdpSolution {
  SymMatrix x_hat;
  IndexSet support;  // {i : X_ii > eta}
  double objective = 0.0;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // Largest |merit change| over the last 10 iterations, relative to
  // max(1, |merit|).
  double merit_drift = 0.0;
  double final_tau = 0.0;
  bool converged = false;
};

// max <M, X> - rho ||X||_{1,1} over {X >= 0, tr X = 1} by scaled ADMM on the
// split X (spectraplex) = Y (l1 block):
//   X <- P(Y - U + M / tau),  Y <- soft(X + U, rho / tau),  U <- U + X - Y.
// Starts from X = Y = I/d, U = 0. Hitting max_iter is not an error; the
// result comes back with converged = false.
SdpSolution solve(const SymMatrix& m, const SdpConfig& cfg);

// {i : X_ii > eta}
IndexSet extract_support(const SymMatrix& x, double eta);

// <M, X> - rho ||X||_{1,1}
double sdp_objective(const SymMatrix& m, const SymMatrix& x, double rho);

struct KktCondition {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

// Optimality conditions for (X, Z, mu) with X supported on J x J:
//   [0] X_JJ >= 0 and tr X_JJ = 1
//   [1] M_JJ - rho Z_JJ <= mu I
//   [2] M - rho Z <= mu I
//   [3] Z in the subdifferential of |X| on J x J
//   [4] |Z_ij| < 1 off J x J (residual = max |Z_ij| there)
//   [5] (M_JJ - rho Z_JJ) X_JJ = mu X_JJ
//   [6] (M_{Jc,J} - rho Z_{Jc,J}) X_JJ = 0
struct KktReport {
  std::vector<KktCondition> conditions;
  bool pass = false;
};

KktReport kkt_check(const SymMatrix& m, const SymMatrix& x, const SymMatrix& z, double mu,
                    const IndexSet& support, double rho, double tol);

}  // namespace spca
