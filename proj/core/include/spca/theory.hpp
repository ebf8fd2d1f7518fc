#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

// Per-block norms of M* split along J. Blocks that do not exist (J^c empty)
// are left zero with `has_complement` false.
struct BlockNorms {
  std::size_t d = 0;
  std::size_t s = 0;
  bool has_complement = false;
  double jj_max = 0.0, jj_two_inf = 0.0;
  double jj_lambda1 = 0.0, jj_lambda2 = 0.0;
  double cj_max = 0.0, cj_fro = 0.0, cj_spectral = 0.0;
  double cj_two_inf = 0.0;      // ||M*_{Jc,J}||_{2,inf}
  double jc_two_inf = 0.0;      // ||M*_{J,Jc}||_{2,inf}
  double jc_inf_two = 0.0;      // ||M*_{J,Jc}||_{inf,2}
  double cc_max = 0.0, cc_spectral = 0.0, cc_two_inf = 0.0;
  double cc_lambda1 = 0.0;

  double lambda_bar() const { return jj_lambda1 - jj_lambda2; }
};

// Requires 2 <= |J| <= d (lambda_2 of M*_JJ must exist).
BlockNorms block_norms(const SymMatrix& m_star, const IndexSet& support);

struct CoherenceParams {
  double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
  // Set when the block defining the parameter is all zero or absent; the
  // value is then 1.
  bool mu1_degenerate = false, mu2_degenerate = false, mu3_degenerate = false;
  // Whether each value lies within its textbook range
  // (1/s..1, 1/sqrt s..1, 1/sqrt(s(d-s))..1, 1/(d-s)..1).
  bool mu0_in_range = false, mu1_in_range = false, mu2_in_range = false, mu3_in_range = false;
};

// Throws InvalidInput when lambda_bar <= 0 or |J| < 2.
CoherenceParams coherence(const SymMatrix& m_star, const IndexSet& support);
CoherenceParams coherence(const BlockNorms& b);

struct BernsteinConstants {
  double c = 1.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0, r6 = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  // R5, R6, K3 have no meaning without a complement; they are reported as 0.
  bool k3_defined = true;
};

// p in (0,1], sigma2 >= 0, b >= 0, c > 0; otherwise InvalidInput.
BernsteinConstants bernstein_constants(const SymMatrix& m_star, const IndexSet& support, double p,
                                       double sigma2, double b, double c = 1.0);
BernsteinConstants bernstein_constants(const BlockNorms& n, double p, double sigma2, double b,
                                       double c = 1.0);

// Signed margins of the three sufficient conditions (positive = holds).
struct Theorem1Margins {
  double sign = 0.0;          // min|u_1,J| - 2 sqrt2 (K1 + rho s) / (p lambda_bar)
  double dual = 0.0;          // rho - [2 sqrt(p s^c {...}) + p ||M*_{Jc,J}||_max]
  double eig = 0.0;           // f1 f2 - lhs, or min(f1, f2) when a factor is negative
  double eig_lhs = 0.0;       // (K2 + p ||M*_{Jc,J}||_2)^2 (1 + sqrt s)^2
  double eig_f1 = 0.0;        // p lambda_bar - 2 K1 - 2 rho s
  double eig_f2 = 0.0;        // p (lambda_1(M*_JJ) - lambda_1(M*_{Jc,Jc})) - K1 - K3 - rho d
  double success_prob_bound = 0.0;
  BernsteinConstants constants;

  bool all_hold() const { return sign >= 0.0 && dual > 0.0 && eig >= 0.0; }
};

// 1 - s^-c - d^-c - (2s)^-c - (2(d-s))^-c; the last term is omitted when
// d == s.
double success_probability_bound(std::size_t d, std::size_t s, double c = 1.0);

Theorem1Margins theorem1_margins(const SymMatrix& m_star, const IndexSet& support,
                                 const std::vector<double>& u1, double p, double sigma2, double b,
                                 double rho, double c = 1.0);

struct Corollary1Report {
  // mu0 sqrt(s) log(s)
  double r_mu0 = 0.0;
  // ||M*_{Jc,J}||_max / (lambda_bar/s * min{mu2, 1/s, sqrt(s)/log d})
  double r_cross = 0.0;
  // ||M*_{Jc,Jc}||_max / (lambda_bar * min{mu3, 1/log(d-s)})
  double r_comp = 0.0;
  // sqrt((1-p)/p) / min{...}
  double r_prob = 0.0;
  // rho s^2 / (p lambda_bar), a Theta(1) condition
  double r_rho = 0.0;
  bool ok_mu0 = false, ok_cross = false, ok_comp = false, ok_prob = false, ok_rho = false;
  bool all_ok() const { return ok_mu0 && ok_cross && ok_comp && ok_prob && ok_rho; }
};

struct Corollary1Slack {
  double small = 1.0;     // o(.) ratios pass when below this
  double theta_lo = 0.1;  // Theta(.) ratio window
  double theta_hi = 10.0;
};

Corollary1Report corollary1_report(const SymMatrix& m_star, const IndexSet& support, double p,
                                   double rho, const Corollary1Slack& slack = {});

struct Corollary2Report {
  double a1 = 0.0, a2 = 0.0;
  double sign_ratio = 0.0;      // 1/(16 sqrt2 log 2s) - max|u_i u_j| / min|u_i|
  double sign_ratio_p = 0.0;    // sqrt(p/(1-p)) / (16 sqrt2 sqrt(log 2s)) - max|u_i| / min|u_i|
  double noise_bound = 0.0;     // (2p - 1) lambda_1 max|u_i u_j| - B
  double rho_lower = 0.0;       // rho - 2 sqrt2 sqrt(p sigma2 s^2 (d-s)), strict
  double rho_upper = 0.0;       // p lambda_1 min|u_i| / (8 sqrt2 s) - rho
  double gate = 0.0;            // rhs - 1/sqrt(s)
  double gate_rhs = 0.0;
  bool in_regime = false;       // p >= 0.5
  bool all_hold() const {
    return in_regime && sign_ratio >= 0.0 && sign_ratio_p >= 0.0 && noise_bound >= 0.0 &&
           rho_lower > 0.0 && rho_upper >= 0.0 && gate >= 0.0;
  }
};

// `u1` is the full length-d leading eigenvector; requires 1 <= |J| < d,
// lambda1 > 0 and p in (0,1].
Corollary2Report corollary2_report(double lambda1, const std::vector<double>& u1,
                                   const IndexSet& support, std::size_t d, double p, double sigma2,
                                   double b, double rho);

// sqrt(p/(1-p)) * min{ mu1 sqrt(log s),
//                      lambda_bar mu2 / ||M*_{Jc,J}||_max * min{s^-2.5, 1/(s sqrt(s(d-s)))},
//                      lambda_bar mu3 / ||M*_{Jc,Jc}||_max / sqrt(log(d-s)) }
// Terms of all-zero blocks are dropped. p == 1 gives +inf.
double rescaled_parameter(const SymMatrix& m_star, const IndexSet& support, double p);
double rescaled_parameter(const BlockNorms& n, const CoherenceParams& mu, double p);

struct TheoryInputs {
  double p = 1.0;
  double sigma2 = 0.0;
  double b = 0.0;
  double rho = 0.0;
  double c = 1.0;
};

struct TheoryReport {
  TheoryInputs inputs;
  std::size_t d = 0;
  std::size_t s = 0;
  double lambda_bar = 0.0;
  CoherenceParams coherence;
  Theorem1Margins thm1;
  Corollary1Report cor1;
  Corollary2Report cor2;
  bool cor2_defined = false;  // needs |J| < d
  double rescaled = 0.0;
};

TheoryReport theory_report(const SymMatrix& m_star, const IndexSet& support,
                           const std::vector<double>& u1, const TheoryInputs& in);

}  // namespace spca
