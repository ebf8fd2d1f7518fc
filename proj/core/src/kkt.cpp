#include <algorithm>
#include <cmath>

#include "spca/error.hpp"
#include "spca/linalg.hpp"
#include "spca/sdp_solver.hpp"

namespace spca {

KktReport kkt_check(const SymMatrix& m, const SymMatrix& x, const SymMatrix& z, double mu,
                    const IndexSet& support, double rho, double tol) {
  const std::size_t d = m.dim();
  if (x.dim() != d || z.dim() != d) throw InvalidInput("kkt_check: dimension mismatch");
  validate_index_set(support, d);
  if (support.empty()) throw InvalidInput("kkt_check: empty support");

  const IndexSet jc = complement(support, d);
  std::vector<bool> in_j(d, false);
  for (std::size_t i : support) in_j[i] = true;
  const double eig_tol = tol * (1.0 + std::abs(mu));

  const SymMatrix x_jj = x.principal(support);
  SymMatrix pen = m - rho * z;
  const SymMatrix pen_jj = pen.principal(support);

  KktReport rep;
  auto add = [&rep](std::string name, double residual, bool pass) {
    rep.conditions.push_back({std::move(name), residual, pass});
  };

  {
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!(in_j[i] && in_j[j])) off = std::max(off, std::abs(x(i, j)));
    const double r = std::max({0.0, -lambda_min(x_jj), std::abs(x_jj.trace() - 1.0), off});
    add("primal_feasible", r, r <= tol);
  }
  {
    const double r = std::max(0.0, lambda_max(pen_jj) - mu);
    add("block_dual_bound", r, r <= eig_tol);
  }
  {
    const double r = std::max(0.0, lambda_max(pen) - mu);
    add("full_dual_bound", r, r <= eig_tol);
  }
  {
    double r = 0.0;
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        const double xv = x_jj(a, b);
        const double zv = z(support[a], support[b]);
        if (std::abs(xv) > tol) {
          r = std::max(r, std::abs(zv - std::copysign(1.0, xv)));
        } else {
          r = std::max(r, std::abs(zv) - 1.0);
        }
      }
    }
    add("subgradient_on_support", r, r <= tol);
  }
  {
    double r = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!(in_j[i] && in_j[j])) r = std::max(r, std::abs(z(i, j)));
    add("strict_dual_off_support", r, r < 1.0);
  }
  {
    const Matrix a = pen_jj.to_dense() * x_jj.to_dense();
    const std::size_t s = support.size();
    double r2 = 0.0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        const double r = a(i, j) - mu * x_jj(i, j);
        r2 += r * r;
      }
    const double r = std::sqrt(r2);
    add("block_eigen_equation", r, r <= eig_tol);
  }
  {
    double r = 0.0;
    if (!jc.empty()) {
      const Matrix a = pen.block(jc, support) * x_jj.to_dense();
      double r2 = 0.0;
      for (double v : a.data()) r2 += v * v;
      r = std::sqrt(r2);
    }
    add("off_block_equation", r, r <= eig_tol);
  }

  rep.pass = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                         [](const KktCondition& c) { return c.pass; });
  return rep;
}

}  // namespace spca
