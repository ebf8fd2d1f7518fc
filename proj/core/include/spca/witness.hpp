#pragma once

#include <cstddef>
#include <vector>

#include "spca/matrix.hpp"
#include "spca/sdp_solver.hpp"

namespace spca {

// Candidate primal-dual pair built from the support J and the sign pattern
// of u_1 on J:
//   z = sign(u_1,J)
//   x = leading unit eigenvector of M_JJ - rho z z^T, with sum_i z_i x_i >= 0
//   w = M_{Jc,J} x / (rho ||x||_1)
//   lambda = lambda_1(M_JJ - rho z z^T)
struct WitnessTriple {
  IndexSet support;
  double rho = 0.0;
  std::vector<double> z_hat;  // length s, entries +-1
  std::vector<double> x_hat;  // length s
  std::vector<double> w_hat;  // length d - s, ordered like complement(J)
  double lambda_hat = 0.0;
  double lambda2_hat = 0.0;   // lambda_2 of the same block (-inf when s == 1)
};

// Throws InvalidInput for rho <= 0, an empty or out-of-range J, or a sign
// vector that is not +-1 of length |J|.
WitnessTriple construct(const SymMatrix& m, const IndexSet& support,
                        const std::vector<double>& u1_signs, double rho);

struct WitnessReport {
  bool sign_match = false;
  // First position in J (index into the support, not into [d]) whose sign
  // disagrees; -1 when none.
  long worst_sign_index = -1;
  double w_inf = 0.0;  // 0 when J^c is empty
  bool w_inf_ok = false;
  double lambda_block = 0.0;
  double lambda_full = 0.0;
  double eig_diff = 0.0;  // |lambda_block - lambda_full|
  bool eig_equal = false;
  double gap = 0.0;       // lambda_1 - lambda_2 of the penalized block
  bool gap_ok = false;
  bool certified = false;
};

struct WitnessTolerances {
  // Absolute tolerance is tol_eq_rel * (1 + |lambda_block|).
  double tol_eq_rel = 1e-8;
  double tol_gap = 1e-8;
};

WitnessReport check(const WitnessTriple& t, const SymMatrix& m, const IndexSet& support,
                    const std::vector<double>& u1_signs, const WitnessTolerances& tol = {});

// x x^T on J x J, zero elsewhere.
SymMatrix witness_primal(const WitnessTriple& t, std::size_t d);
// (z, w)(z, w)^T interleaved over J and J^c.
SymMatrix witness_dual(const WitnessTriple& t, std::size_t d);

struct CertifiedOutcome {
  bool certified = false;
  bool support_match = false;   // solution.support == J
  double frobenius_gap = 0.0;   // ||X_hat - witness primal||_F
  WitnessReport report;
};

// Builds and checks the witness, then compares it with an SDP solution.
// Throws RefusesToCertify when the solution did not converge.
CertifiedOutcome certify_solution(const SymMatrix& m, const IndexSet& support,
                                  const std::vector<double>& u1_signs, double rho,
                                  const SdpSolution& solution,
                                  const WitnessTolerances& tol = {});

// Quantities behind the sufficient conditions for the witness conditions,
// evaluated on the observed matrix.
struct WitnessDiagnostics {
  // ||x - u_1,J||_2 and min_i |u_1,i|; the sign pattern is safe when the
  // first does not exceed the second.
  double x_deviation = 0.0;
  double u_min = 0.0;
  bool sign_sufficient = false;
  // ||M_{Jc,J} - rho w z^T||_2^2 against
  // (lambda_1 - lambda_2)(lambda_1 - lambda_1(M_{Jc,Jc} - rho w w^T)).
  double eig_lhs = 0.0;
  double eig_rhs = 0.0;
  bool eig_sufficient = false;
  // ||w||_2 and its deterministic bound ||M_{J,Jc}||_{inf,2} / rho.
  double w_two = 0.0;
  double w_two_bound = 0.0;
};

// `u1_on_support` is u_1 restricted to J (same order as J).
WitnessDiagnostics witness_diagnostics(const WitnessTriple& t, const SymMatrix& m,
                                       const std::vector<double>& u1_on_support);

// Hypothesis of the scalar inequality 2a sqrt(t(1-t)) <= b t + c on [0,1]:
// a^2 <= c(b + c), c >= 0, b + c >= 0.
bool quad_hypothesis(double a, double b, double c);
// b t + c - 2a sqrt(t(1-t))
double quad_slack(double a, double b, double c, double t);

}  // namespace spca
