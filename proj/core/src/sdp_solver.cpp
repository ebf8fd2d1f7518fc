#include "spca/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "spca/error.hpp"
#include "spca/linalg.hpp"

namespace spca {
namespace {

constexpr std::size_t kMeritWindow = 10;
constexpr double kBalanceRatio = 10.0;
constexpr double kBalanceFactor = 2.0;

}  // namespace

void SdpConfig::validate() const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidInput("SdpConfig: rho must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("SdpConfig: tau must be > 0");
  if (!(tol_primal > 0.0) || !(tol_dual > 0.0))
    throw InvalidInput("SdpConfig: tolerances must be > 0");
  if (max_iter == 0) throw InvalidInput("SdpConfig: max_iter must be >= 1");
  if (!(eta_support > 0.0 && eta_support < 1.0))
    throw InvalidInput("SdpConfig: eta_support must lie in (0, 1)");
}

double sdp_objective(const SymMatrix& m, const SymMatrix& x, double rho) {
  return inner(m, x) - rho * l11_norm(x);
}

IndexSet extract_support(const SymMatrix& x, double eta) {
  IndexSet out;
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (x(i, i) > eta) out.push_back(i);
  return out;
}

SdpSolution solve(const SymMatrix& m, const SdpConfig& cfg) {
  cfg.validate();
  const std::size_t d = m.dim();
  if (d == 0) throw InvalidInput("solve: empty matrix");

  SymMatrix x = SymMatrix::identity(d) * (1.0 / static_cast<double>(d));
  SymMatrix y = x;
  SymMatrix u(d);
  const double m_norm = frobenius_norm(m);
  const double tiny = std::numeric_limits<double>::min();
  const double tau_lo = cfg.tau * 1e-6;
  const double tau_hi = cfg.tau * 1e6;
  double tau = cfg.tau;

  SdpSolution sol;
  std::deque<double> merits;
  std::size_t it = 0;
  while (it < cfg.max_iter) {
    ++it;
    // X-update.
    SymMatrix arg = y;
    arg -= u;
    {
      auto a = arg.packed();
      auto mp = m.packed();
      const double inv = 1.0 / tau;
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += mp[k] * inv;
    }
    x = project_spectraplex(arg);

    // Y-update.
    SymMatrix y_prev = std::move(y);
    SymMatrix xu = x;
    xu += u;
    y = soft_threshold(xu, cfg.rho / tau);

    // U-update, accumulating residual norms on the way.
    double r2 = 0.0;
    double dy2 = 0.0;
    {
      auto up = u.packed();
      auto xp = x.packed();
      auto yp = y.packed();
      auto ypp = y_prev.packed();
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j, ++idx) {
          const double w = i == j ? 1.0 : 2.0;
          const double r = xp[idx] - yp[idx];
          const double dy = yp[idx] - ypp[idx];
          up[idx] += r;
          r2 += w * r * r;
          dy2 += w * dy * dy;
        }
      }
    }
    const double primal =
        std::sqrt(r2) / std::max({frobenius_norm(x), frobenius_norm(y), tiny});
    const double dual =
        tau * std::sqrt(dy2) / std::max({m_norm, tau * frobenius_norm(u), tiny});

    merits.push_back(sdp_objective(m, x, cfg.rho));
    if (merits.size() > kMeritWindow + 1) merits.pop_front();

    sol.primal_residual = primal;
    sol.dual_residual = dual;
    if (primal <= cfg.tol_primal && dual <= cfg.tol_dual && merits.size() == kMeritWindow + 1) {
      double drift = 0.0;
      const double scale = std::max(1.0, std::abs(merits.back()));
      for (double v : merits) drift = std::max(drift, std::abs(v - merits.back()) / scale);
      sol.merit_drift = drift;
      if (drift <= std::max(cfg.tol_primal, cfg.tol_dual)) {
        sol.converged = true;
        break;
      }
    }

    if (cfg.residual_balancing) {
      double next = tau;
      if (primal > kBalanceRatio * dual) {
        next = std::min(tau * kBalanceFactor, tau_hi);
      } else if (dual > kBalanceRatio * primal) {
        next = std::max(tau / kBalanceFactor, tau_lo);
      }
      if (next != tau) {
        // Scaled dual variable is (true dual) / tau.
        u *= tau / next;
        tau = next;
      }
    }
  }

  if (!sol.converged && merits.size() > 1) {
    double drift = 0.0;
    const double scale = std::max(1.0, std::abs(merits.back()));
    for (double v : merits) drift = std::max(drift, std::abs(v - merits.back()) / scale);
    sol.merit_drift = drift;
  }
  sol.iterations = it;
  sol.final_tau = tau;
  sol.objective = sdp_objective(m, x, cfg.rho);
  sol.support = extract_support(x, cfg.eta_support);
  sol.x_hat = std::move(x);
  return sol;
}

}  // namespace spca
