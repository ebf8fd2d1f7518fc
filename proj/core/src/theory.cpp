#include "spca/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spca/error.hpp"
#include "spca/linalg.hpp"

namespace spca {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

// max/den, or +inf for a zero denominator.
double ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

void check_probability(double p, const char* where) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput(std::string(where) + ": p must lie in (0, 1]");
}

double k_constant(double c, double ra, double rb, double log_term) {
  return (c + 1.0) * ra * log_term + std::sqrt(2.0 * (c + 1.0)) * rb * std::sqrt(log_term);
}

double r_max_form(double p, double block_max, double b) {
  return std::max((1.0 - p) * block_max + b, p * block_max);
}

}  // namespace

BlockNorms block_norms(const SymMatrix& m_star, const IndexSet& support) {
  const std::size_t d = m_star.dim();
  validate_index_set(support, d);
  if (support.size() < 2)
    throw InvalidInput("block_norms: need |J| >= 2 for the spectral gap of M*_JJ");

  BlockNorms n;
  n.d = d;
  n.s = support.size();
  const SymMatrix jj = m_star.principal(support);
  const NormReport njj = norms(jj.to_dense());
  n.jj_max = njj.max;
  n.jj_two_inf = njj.two_inf;
  const auto ev = sym_eigenvalues(jj);
  n.jj_lambda1 = ev[0];
  n.jj_lambda2 = ev[1];

  const IndexSet jc = complement(support, d);
  n.has_complement = !jc.empty();
  if (n.has_complement) {
    const NormReport ncj = norms(m_star.block(jc, support));
    n.cj_max = ncj.max;
    n.cj_fro = ncj.frobenius;
    n.cj_spectral = ncj.spectral;
    n.cj_two_inf = ncj.two_inf;
    const NormReport njc = norms(m_star.block(support, jc));
    n.jc_two_inf = njc.two_inf;
    n.jc_inf_two = njc.inf_two;
    const SymMatrix cc = m_star.principal(jc);
    const NormReport ncc = norms(cc);
    n.cc_max = ncc.max;
    n.cc_spectral = ncc.spectral;
    n.cc_two_inf = ncc.two_inf;
    n.cc_lambda1 = lambda_max(cc);
  }
  return n;
}

CoherenceParams coherence(const BlockNorms& b) {
  const double lbar = b.lambda_bar();
  if (!(lbar > 0.0)) throw InvalidInput("coherence: lambda_1(M*_JJ) - lambda_2(M*_JJ) must be > 0");
  const double s = static_cast<double>(b.s);
  const double dc = static_cast<double>(b.d - b.s);

  CoherenceParams mu;
  mu.mu0 = b.jj_max / lbar;
  if (b.jj_max > 0.0) {
    mu.mu1 = b.jj_max / b.jj_two_inf;
  } else {
    mu.mu1 = 1.0;
    mu.mu1_degenerate = true;
  }
  if (b.has_complement && b.cj_max > 0.0) {
    const double m = b.cj_max;
    mu.mu2 = std::min({m / b.cj_fro, std::max(m / b.cj_two_inf, m / b.jc_two_inf), m / b.jc_inf_two});
  } else {
    mu.mu2 = 1.0;
    mu.mu2_degenerate = true;
  }
  if (b.has_complement && b.cc_max > 0.0) {
    mu.mu3 = std::min(b.cc_max / b.cc_spectral, b.cc_max / b.cc_two_inf);
  } else {
    mu.mu3 = 1.0;
    mu.mu3_degenerate = true;
  }

  // Relative slack for rounding in the ratios.
  const double e = 1e-12;
  auto within = [e](double v, double lo, double hi) { return v >= lo * (1 - e) && v <= hi * (1 + e); };
  mu.mu0_in_range = within(mu.mu0, 1.0 / s, 1.0);
  mu.mu1_in_range = within(mu.mu1, 1.0 / std::sqrt(s), 1.0);
  mu.mu2_in_range = mu.mu2_degenerate || within(mu.mu2, 1.0 / std::sqrt(s * dc), 1.0);
  mu.mu3_in_range = mu.mu3_degenerate || within(mu.mu3, 1.0 / dc, 1.0);
  return mu;
}

CoherenceParams coherence(const SymMatrix& m_star, const IndexSet& support) {
  return coherence(block_norms(m_star, support));
}

BernsteinConstants bernstein_constants(const BlockNorms& n, double p, double sigma2, double b,
                                       double c) {
  check_probability(p, "bernstein_constants");
  if (!(sigma2 >= 0.0) || !(b >= 0.0)) throw InvalidInput("bernstein_constants: noise must be >= 0");
  if (!(c > 0.0)) throw InvalidInput("bernstein_constants: c must be > 0");

  const double s = static_cast<double>(n.s);
  const double d = static_cast<double>(n.d);
  const double dc = d - s;
  const double spq = std::sqrt(p * (1.0 - p));

  BernsteinConstants k;
  k.c = c;
  k.r1 = r_max_form(p, n.jj_max, b);
  k.r2 = spq * n.jj_two_inf + std::sqrt(p * s * sigma2);
  k.r3 = r_max_form(p, n.cj_max, b);
  k.r4 = std::max(spq * n.cj_two_inf + std::sqrt(p * dc * sigma2),
                  spq * n.jc_two_inf + std::sqrt(p * s * sigma2));
  k.k1 = k_constant(c, k.r1, k.r2, std::log(2.0 * s));
  k.k2 = k_constant(c, k.r3, k.r4, std::log(d));
  if (n.has_complement) {
    k.r5 = r_max_form(p, n.cc_max, b);
    k.r6 = spq * n.cc_two_inf + std::sqrt(p * dc * sigma2);
    k.k3 = k_constant(c, k.r5, k.r6, std::log(2.0 * dc));
  } else {
    k.k3_defined = false;
  }
  return k;
}

BernsteinConstants bernstein_constants(const SymMatrix& m_star, const IndexSet& support, double p,
                                       double sigma2, double b, double c) {
  return bernstein_constants(block_norms(m_star, support), p, sigma2, b, c);
}

double success_probability_bound(std::size_t d, std::size_t s, double c) {
  if (s == 0 || s > d) throw InvalidInput("success_probability_bound: need 1 <= s <= d");
  const double sd = static_cast<double>(s);
  const double dd = static_cast<double>(d);
  double v = 1.0 - std::pow(sd, -c) - std::pow(dd, -c) - std::pow(2.0 * sd, -c);
  if (d > s) v -= std::pow(2.0 * (dd - sd), -c);
  return v;
}

Theorem1Margins theorem1_margins(const SymMatrix& m_star, const IndexSet& support,
                                 const std::vector<double>& u1, double p, double sigma2, double b,
                                 double rho, double c) {
  if (u1.size() != m_star.dim()) throw InvalidInput("theorem1_margins: u1 length differs from d");
  if (!(rho >= 0.0)) throw InvalidInput("theorem1_margins: rho must be >= 0");
  const BlockNorms n = block_norms(m_star, support);
  const double lbar = n.lambda_bar();
  if (!(lbar > 0.0)) throw InvalidInput("theorem1_margins: lambda_bar must be > 0");

  Theorem1Margins t;
  t.constants = bernstein_constants(n, p, sigma2, b, c);
  const auto& k = t.constants;
  const double s = static_cast<double>(n.s);
  const double d = static_cast<double>(n.d);

  double umin = kInf;
  for (std::size_t i : support) umin = std::min(umin, std::abs(u1[i]));
  t.sign = umin - 2.0 * kSqrt2 * (k.k1 + rho * s) / (p * lbar);

  const double inner_term = (1.0 - p) * n.cj_fro * n.cj_fro + (d - s) * s * sigma2;
  t.dual = rho - (2.0 * std::sqrt(p * std::pow(s, c) * inner_term) + p * n.cj_max);

  const double lhs_root = (k.k2 + p * n.cj_spectral) * (1.0 + std::sqrt(s));
  t.eig_lhs = lhs_root * lhs_root;
  t.eig_f1 = p * lbar - 2.0 * k.k1 - 2.0 * rho * s;
  t.eig_f2 = p * (n.jj_lambda1 - n.cc_lambda1) - k.k1 - k.k3 - rho * d;
  if (t.eig_f1 >= 0.0 && t.eig_f2 >= 0.0) {
    t.eig = t.eig_f1 * t.eig_f2 - t.eig_lhs;
  } else {
    t.eig = std::min(t.eig_f1, t.eig_f2);
  }
  t.success_prob_bound = success_probability_bound(n.d, n.s, c);
  return t;
}

double rescaled_parameter(const BlockNorms& n, const CoherenceParams& mu, double p) {
  check_probability(p, "rescaled_parameter");
  if (p == 1.0) return kInf;
  const double s = static_cast<double>(n.s);
  const double dc = static_cast<double>(n.d - n.s);
  const double lbar = n.lambda_bar();

  double t = mu.mu1 * std::sqrt(std::log(s));
  if (n.has_complement && n.cj_max > 0.0) {
    const double f = std::min(1.0 / (s * s * std::sqrt(s)), 1.0 / (s * std::sqrt(s * dc)));
    t = std::min(t, lbar * mu.mu2 / n.cj_max * f);
  }
  if (n.has_complement && n.cc_max > 0.0) {
    const double lg = std::log(dc);
    if (lg > 0.0) t = std::min(t, lbar * mu.mu3 / n.cc_max / std::sqrt(lg));
  }
  return std::sqrt(p / (1.0 - p)) * t;
}

double rescaled_parameter(const SymMatrix& m_star, const IndexSet& support, double p) {
  const BlockNorms n = block_norms(m_star, support);
  return rescaled_parameter(n, coherence(n), p);
}

Corollary1Report corollary1_report(const SymMatrix& m_star, const IndexSet& support, double p,
                                   double rho, const Corollary1Slack& slack) {
  check_probability(p, "corollary1_report");
  const BlockNorms n = block_norms(m_star, support);
  const CoherenceParams mu = coherence(n);
  const double s = static_cast<double>(n.s);
  const double d = static_cast<double>(n.d);
  const double dc = d - s;
  const double lbar = n.lambda_bar();

  Corollary1Report r;
  r.r_mu0 = mu.mu0 * std::sqrt(s) * std::log(s);

  if (n.cj_max > 0.0) {
    const double m = std::min({mu.mu2, 1.0 / s, std::sqrt(s) / std::log(d)});
    r.r_cross = n.cj_max / (lbar / s * m);
  }
  if (n.cc_max > 0.0) {
    const double m = std::min(mu.mu3, ratio(1.0, std::log(dc)));
    r.r_comp = n.cc_max / (lbar * m);
  }
  const double num = std::sqrt((1.0 - p) / p);
  if (num > 0.0) {
    const double scaled = rescaled_parameter(n, mu, p);
    // scaled = sqrt(p/(1-p)) * T
    r.r_prob = num / (scaled / std::sqrt(p / (1.0 - p)));
  }
  r.r_rho = rho * s * s / (p * lbar);

  r.ok_mu0 = r.r_mu0 < slack.small;
  r.ok_cross = r.r_cross < slack.small;
  r.ok_comp = r.r_comp < slack.small;
  r.ok_prob = r.r_prob < slack.small;
  r.ok_rho = r.r_rho >= slack.theta_lo && r.r_rho <= slack.theta_hi;
  return r;
}

Corollary2Report corollary2_report(double lambda1, const std::vector<double>& u1,
                                   const IndexSet& support, std::size_t d, double p, double sigma2,
                                   double b, double rho) {
  check_probability(p, "corollary2_report");
  if (u1.size() != d) throw InvalidInput("corollary2_report: u1 length differs from d");
  validate_index_set(support, d);
  if (support.empty() || support.size() >= d)
    throw InvalidInput("corollary2_report: need 1 <= |J| < d");
  if (!(lambda1 > 0.0)) throw InvalidInput("corollary2_report: lambda1 must be > 0");

  const double s = static_cast<double>(support.size());
  const double dd = static_cast<double>(d);
  const double dc = dd - s;
  const double log2s = std::log(2.0 * s);
  const double logd = std::log(dd);
  const double log2c = std::log(2.0 * dc);
  const double q = 2.0 - 1.0 / p;

  Corollary2Report r;
  r.in_regime = p >= 0.5;
  r.a1 = q * logd / (8.0 * kSqrt2 * log2s) +
         std::sqrt(std::max(dc, s)) * std::sqrt(logd) / (16.0 * s * s * std::sqrt(dc));
  r.a2 = q * log2c / (8.0 * kSqrt2 * log2s) + std::sqrt(log2c) / (16.0 * s * s);

  double umax = 0.0;
  double umin = kInf;
  for (std::size_t i : support) {
    umax = std::max(umax, std::abs(u1[i]));
    umin = std::min(umin, std::abs(u1[i]));
  }
  const double uu = umax * umax;

  r.sign_ratio = 1.0 / (16.0 * kSqrt2 * log2s) - uu / umin;
  const double odds = p < 1.0 ? std::sqrt(p / (1.0 - p)) : kInf;
  r.sign_ratio_p = odds / (16.0 * kSqrt2 * std::sqrt(log2s)) - umax / umin;
  r.noise_bound = (2.0 * p - 1.0) * lambda1 * uu - b;
  r.rho_lower = rho - 2.0 * kSqrt2 * std::sqrt(p * sigma2 * s * s * dc);
  r.rho_upper = p * lambda1 * umin / (8.0 * kSqrt2 * s) - rho;

  const double ratio_ds = dc / s;
  const double onesq = (1.0 + std::sqrt(s)) * (1.0 + std::sqrt(s));
  const double inner_term = 4.0 - ratio_ds - 8.0 * kSqrt2 * r.a2;
  const double num = 12.0 + ratio_ds + 8.0 * kSqrt2 * r.a2 -
                     std::sqrt(inner_term * inner_term + 512.0 * r.a1 * r.a1 * onesq);
  const double den = 4.0 * kSqrt2 + kSqrt2 * ratio_ds + 16.0 * r.a2 -
                     16.0 * kSqrt2 * r.a1 * r.a1 * onesq;
  r.gate_rhs = den != 0.0 ? num / den : (num > 0.0 ? kInf : (num < 0.0 ? -kInf : 0.0));
  r.gate = r.gate_rhs - 1.0 / std::sqrt(s);
  return r;
}

TheoryReport theory_report(const SymMatrix& m_star, const IndexSet& support,
                           const std::vector<double>& u1, const TheoryInputs& in) {
  TheoryReport r;
  r.inputs = in;
  r.d = m_star.dim();
  r.s = support.size();
  const BlockNorms n = block_norms(m_star, support);
  r.lambda_bar = n.lambda_bar();
  r.coherence = coherence(n);
  r.thm1 = theorem1_margins(m_star, support, u1, in.p, in.sigma2, in.b, in.rho, in.c);
  r.cor1 = corollary1_report(m_star, support, in.p, in.rho);
  const double l1 = lambda_max(m_star);
  r.cor2_defined = support.size() < r.d && l1 > 0.0;
  if (r.cor2_defined)
    r.cor2 = corollary2_report(l1, u1, support, r.d, in.p, in.sigma2, in.b, in.rho);
  r.rescaled = rescaled_parameter(n, r.coherence, in.p);
  return r;
}

}  // namespace spca
