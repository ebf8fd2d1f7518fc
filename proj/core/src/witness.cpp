#include "spca/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spca/error.hpp"
#include "spca/linalg.hpp"

namespace spca {
namespace {

SymMatrix penalized_block(const SymMatrix& m, const IndexSet& support,
                          const std::vector<double>& z, double rho) {
  SymMatrix b = m.principal(support);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) b.add(i, j, -rho * z[i] * z[j]);
  return b;
}

}  // namespace

WitnessTriple construct(const SymMatrix& m, const IndexSet& support,
                        const std::vector<double>& u1_signs, double rho) {
  const std::size_t d = m.dim();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("construct: rho must be > 0");
  if (support.empty()) throw InvalidInput("construct: empty support");
  validate_index_set(support, d);
  if (u1_signs.size() != support.size())
    throw InvalidInput("construct: sign vector length differs from |J|");
  for (double v : u1_signs)
    if (v != 1.0 && v != -1.0) throw InvalidInput("construct: signs must be +1 or -1");

  WitnessTriple t;
  t.support = support;
  t.rho = rho;
  t.z_hat = u1_signs;

  const SymMatrix block = penalized_block(m, support, t.z_hat, rho);
  const auto eig = sym_eig(block);
  t.lambda_hat = eig.values[0];
  t.lambda2_hat = eig.values.size() > 1 ? eig.values[1] : -std::numeric_limits<double>::infinity();
  t.x_hat = eig.vector(0);
  if (dot(t.z_hat, t.x_hat) < 0.0)
    for (double& v : t.x_hat) v = -v;

  double l1 = 0.0;
  for (double v : t.x_hat) l1 += std::abs(v);
  const IndexSet jc = complement(support, d);
  if (!jc.empty()) {
    t.w_hat = m.block(jc, support) * t.x_hat;
    for (double& v : t.w_hat) v /= rho * l1;
  }
  return t;
}

WitnessReport check(const WitnessTriple& t, const SymMatrix& m, const IndexSet& support,
                    const std::vector<double>& u1_signs, const WitnessTolerances& tol) {
  const std::size_t d = m.dim();
  if (t.support != support || u1_signs.size() != support.size() ||
      t.x_hat.size() != support.size() || t.w_hat.size() != d - support.size())
    throw InvalidInput("check: witness does not match the support");

  WitnessReport r;
  r.sign_match = true;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double sx = t.x_hat[i] > 0.0 ? 1.0 : (t.x_hat[i] < 0.0 ? -1.0 : 0.0);
    if (sx != u1_signs[i]) {
      r.sign_match = false;
      r.worst_sign_index = static_cast<long>(i);
      break;
    }
  }

  for (double v : t.w_hat) r.w_inf = std::max(r.w_inf, std::abs(v));
  r.w_inf_ok = r.w_inf < 1.0;

  r.lambda_block = t.lambda_hat;
  r.lambda_full = lambda_max(m - t.rho * witness_dual(t, d));
  r.eig_diff = std::abs(r.lambda_block - r.lambda_full);
  r.eig_equal = r.eig_diff <= tol.tol_eq_rel * (1.0 + std::abs(r.lambda_block));

  r.gap = t.lambda_hat - t.lambda2_hat;
  r.gap_ok = r.gap > tol.tol_gap;

  r.certified = r.sign_match && r.w_inf_ok && r.eig_equal && r.gap_ok;
  return r;
}

SymMatrix witness_primal(const WitnessTriple& t, std::size_t d) {
  SymMatrix x(d);
  for (std::size_t a = 0; a < t.support.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) x.set(t.support[a], t.support[b], t.x_hat[a] * t.x_hat[b]);
  return x;
}

SymMatrix witness_dual(const WitnessTriple& t, std::size_t d) {
  std::vector<double> v(d, 0.0);
  for (std::size_t a = 0; a < t.support.size(); ++a) v[t.support[a]] = t.z_hat[a];
  const IndexSet jc = complement(t.support, d);
  for (std::size_t a = 0; a < jc.size(); ++a) v[jc[a]] = t.w_hat[a];
  return SymMatrix::outer(v);
}

CertifiedOutcome certify_solution(const SymMatrix& m, const IndexSet& support,
                                  const std::vector<double>& u1_signs, double rho,
                                  const SdpSolution& solution, const WitnessTolerances& tol) {
  if (!solution.converged) throw RefusesToCertify("certify_solution: solver did not converge");
  if (solution.x_hat.dim() != m.dim()) throw InvalidInput("certify_solution: dimension mismatch");

  const WitnessTriple t = construct(m, support, u1_signs, rho);
  CertifiedOutcome out;
  out.report = check(t, m, support, u1_signs, tol);
  out.certified = out.report.certified;
  out.support_match = solution.support == support;
  out.frobenius_gap = frobenius_distance(solution.x_hat, witness_primal(t, m.dim()));
  return out;
}

WitnessDiagnostics witness_diagnostics(const WitnessTriple& t, const SymMatrix& m,
                                       const std::vector<double>& u1_on_support) {
  const std::size_t d = m.dim();
  const std::size_t s = t.support.size();
  if (u1_on_support.size() != s) throw InvalidInput("witness_diagnostics: u1 length differs from |J|");

  WitnessDiagnostics g;
  double dev2 = 0.0;
  g.u_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s; ++i) {
    const double r = t.x_hat[i] - u1_on_support[i];
    dev2 += r * r;
    g.u_min = std::min(g.u_min, std::abs(u1_on_support[i]));
  }
  g.x_deviation = std::sqrt(dev2);
  g.sign_sufficient = g.x_deviation <= g.u_min;

  const IndexSet jc = complement(t.support, d);
  if (jc.empty()) {
    g.eig_lhs = 0.0;
    g.eig_rhs = std::numeric_limits<double>::infinity();
    g.eig_sufficient = true;
    return g;
  }

  Matrix off = m.block(jc, t.support);
  for (std::size_t i = 0; i < jc.size(); ++i)
    for (std::size_t j = 0; j < s; ++j) off(i, j) -= t.rho * t.w_hat[i] * t.z_hat[j];
  const double off_norm = norms(off).spectral;
  g.eig_lhs = off_norm * off_norm;

  SymMatrix cc = m.principal(jc);
  for (std::size_t i = 0; i < jc.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) cc.add(i, j, -t.rho * t.w_hat[i] * t.w_hat[j]);
  const double margin = t.lambda_hat - lambda_max(cc);
  if (s > 1) {
    g.eig_rhs = (t.lambda_hat - t.lambda2_hat) * margin;
  } else {
    // No direction orthogonal to x inside J.
    g.eig_rhs = margin >= 0.0 ? std::numeric_limits<double>::infinity() : margin;
  }
  g.eig_sufficient = g.eig_lhs <= g.eig_rhs;

  g.w_two = norm2(t.w_hat);
  g.w_two_bound = norms(m.block(t.support, jc)).inf_two / t.rho;
  return g;
}

bool quad_hypothesis(double a, double b, double c) {
  return a * a <= c * (b + c) && c >= 0.0 && b + c >= 0.0;
}

double quad_slack(double a, double b, double c, double t) {
  return b * t + c - 2.0 * a * std::sqrt(t * (1.0 - t));
}

}  // namespace spca
