#include <algorithm>
#include <cmath>
#include <functional>

#include "spca/error.hpp"
#include "spca/linalg.hpp"

namespace spca {

NormReport norms(const Matrix& a) {
  if (a.empty()) throw InvalidInput("norms: empty matrix view");
  NormReport r;
  double fro2 = 0.0;
  double inf_two2 = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double col2 = 0.0;
    double col1 = 0.0;
    double colmax = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double x = a(i, j);
      if (!std::isfinite(x)) throw InvalidInput("norms: non-finite entry");
      col2 += x * x;
      col1 += std::abs(x);
      colmax = std::max(colmax, std::abs(x));
    }
    fro2 += col2;
    r.l11 += col1;
    r.max = std::max(r.max, colmax);
    r.two_inf = std::max(r.two_inf, std::sqrt(col2));
    r.one_inf = std::max(r.one_inf, col1);
    inf_two2 += colmax * colmax;
  }
  r.frobenius = std::sqrt(fro2);
  r.inf_two = std::sqrt(inf_two2);

  // sigma_1(A)^2 = lambda_max of the smaller Gram matrix.
  const bool tall = a.rows() >= a.cols();
  const std::size_t g = tall ? a.cols() : a.rows();
  SymMatrix gram(g);
  for (std::size_t p = 0; p < g; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      double s = 0.0;
      if (tall) {
        for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, p) * a(i, q);
      } else {
        s = dot(a.row(p), a.row(q));
      }
      gram.set(p, q, s);
    }
  }
  r.spectral = std::sqrt(std::max(0.0, lambda_max(gram)));
  return r;
}

NormReport norms(const SymMatrix& a) {
  if (a.dim() == 0) throw InvalidInput("norms: empty matrix");
  NormReport r = norms(a.to_dense());
  const auto ev = sym_eigenvalues(a);
  r.spectral = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return r;
}

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw InvalidInput("project_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i] - theta, 0.0);
  return w;
}

SymMatrix project_spectraplex(const SymMatrix& s) {
  std::vector<double> w;
  const auto eig = sym_eig_leading(s, [&w](std::span<const double> values) {
    w = project_simplex(values);
    // Simplex weights are nonincreasing along descending values.
    return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double x) { return x > 0.0; }));
  });
  return recompose(eig.vectors, w);
}

SymMatrix soft_threshold(const SymMatrix& a, double t) {
  if (!(t >= 0.0)) throw InvalidInput("soft_threshold: threshold must be nonnegative");
  SymMatrix out = a;
  for (double& x : out.packed()) {
    const double mag = std::abs(x) - t;
    x = mag > 0.0 ? std::copysign(mag, x) : 0.0;
  }
  return out;
}

}  // namespace spca
