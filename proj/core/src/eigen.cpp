// Symmetric eigensolver: Householder reduction to tridiagonal form followed by
// the implicit-shift QL iteration (the EISPACK tred2/tql2 pair).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

#include "spca/error.hpp"
#include "spca/linalg.hpp"

namespace spca {
namespace {

// Householder reduction of the dense symmetric matrix held in `v`. On exit
// e[1..n-1] is the subdiagonal, d[i] the scalar h_i of reflector i, whose
// vector sits in v(0..i-1, i); the tridiagonal diagonal sits on diag(v).
void reduce(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
}

// Overwrites `v` (after reduce) with the orthogonal factor Q, and d with the
// tridiagonal diagonal.
void accumulate(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());
  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). Rotations are applied to the rows
// of `vt` (the transposed eigenvector matrix) when `vectors` is set.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix* vt,
                 std::size_t max_iterations) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  std::size_t iterations = 0;

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      do {
        if (++iterations > max_iterations)
          throw NoConvergence("sym_eig: implicit QL exceeded its iteration cap", std::abs(e[l]));

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          if (vt != nullptr) {
            auto lo = vt->row(static_cast<std::size_t>(i));
            auto hi = vt->row(static_cast<std::size_t>(i + 1));
            for (int k = 0; k < n; ++k) {
              const double t = hi[k];
              hi[k] = s * lo[k] + c * t;
              lo[k] = c * lo[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void require_usable(const SymMatrix& a) {
  if (a.dim() == 0) throw InvalidInput("sym_eig: empty matrix");
  for (double x : a.packed())
    if (!std::isfinite(x)) throw InvalidInput("sym_eig: non-finite entry");
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  return order;
}

struct Tridiagonal {
  std::span<const double> diag;  // length n
  std::span<const double> sub;   // sub[i] couples i-1 and i, sub[0] unused
};

// Solves (T - sigma I) y = b in place by Gaussian elimination with partial
// pivoting; tiny pivots are replaced by `pivmin`.
void shifted_solve(const Tridiagonal& t, double sigma, double pivmin, std::vector<double>& b) {
  const std::size_t n = t.diag.size();
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), l(n, 0.0);
  std::vector<char> swapped(n, 0);
  auto guard = [pivmin](double x) { return std::abs(x) < pivmin ? std::copysign(pivmin, x) : x; };

  double diag = t.diag[0] - sigma;
  double sup = n > 1 ? t.sub[1] : 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double below = t.sub[i + 1];
    const double next_diag = t.diag[i + 1] - sigma;
    const double next_sup = i + 2 < n ? t.sub[i + 2] : 0.0;
    if (std::abs(diag) >= std::abs(below)) {
      diag = guard(diag);
      const double m = below / diag;
      u0[i] = diag;
      u1[i] = sup;
      l[i] = m;
      diag = next_diag - m * sup;
      sup = next_sup;
    } else {
      const double m = diag / below;
      u0[i] = below;
      u1[i] = next_diag;
      u2[i] = next_sup;
      l[i] = m;
      swapped[i] = 1;
      diag = sup - m * next_diag;
      sup = -m * next_sup;
    }
  }
  u0[n - 1] = guard(diag);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(b[i], b[i + 1]);
    b[i + 1] -= l[i] * b[i];
  }
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    if (r + 1 < n) acc -= u1[r] * b[r + 1];
    if (r + 2 < n) acc -= u2[r] * b[r + 2];
    b[r] = acc / u0[r];
  }
}

// Inverse iteration for the eigenvectors of T belonging to `lambdas`
// (descending). Vectors of nearby eigenvalues are reorthogonalized. Returns
// false when a residual or orthogonality check fails.
bool tridiagonal_vectors(const Tridiagonal& t, std::span<const double> lambdas,
                         std::vector<std::vector<double>>& ys) {
  const std::size_t n = t.diag.size();
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(t.diag[i]);
    if (i > 0) row += std::abs(t.sub[i]);
    if (i + 1 < n) row += std::abs(t.sub[i + 1]);
    tnorm = std::max(tnorm, row);
  }
  if (tnorm == 0.0) tnorm = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin = eps * tnorm;
  const double cluster = 1e-3 * tnorm;
  const double residual_tol = 1e3 * static_cast<double>(n) * eps * tnorm;

  auto reorthogonalize = [&](std::vector<double>& y, std::size_t upto, double lambda) {
    for (std::size_t q = 0; q < upto; ++q) {
      if (std::abs(lambdas[q] - lambda) > cluster) continue;
      const double proj = dot(y, ys[q]);
      for (std::size_t i = 0; i < n; ++i) y[i] -= proj * ys[q][i];
    }
  };

  ys.clear();
  std::uint64_t state = 0x853c49e6748fea9bULL;
  for (std::size_t c = 0; c < lambdas.size(); ++c) {
    std::vector<double> y(n);
    for (double& x : y) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      x = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
    for (int it = 0; it < 4; ++it) {
      shifted_solve(t, lambdas[c], pivmin, y);
      reorthogonalize(y, c, lambdas[c]);
      const double ny = norm2(y);
      if (!(ny > 0.0) || !std::isfinite(ny)) return false;
      for (double& x : y) x /= ny;
    }

    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ty = t.diag[i] * y[i];
      if (i > 0) ty += t.sub[i] * y[i - 1];
      if (i + 1 < n) ty += t.sub[i + 1] * y[i + 1];
      const double r = ty - lambdas[c] * y[i];
      r2 += r * r;
    }
    if (std::sqrt(r2) > residual_tol) return false;
    for (const auto& q : ys)
      if (std::abs(dot(y, q)) > 1e-10) return false;
    ys.push_back(std::move(y));
  }
  return true;
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& a, const EigOptions& opts) {
  require_usable(a);
  const std::size_t n = a.dim();
  Matrix v = a.to_dense();
  std::vector<double> d(n);
  std::vector<double> e(n);
  reduce(v, d, e);
  accumulate(v, d, e);

  // QL rotations act on columns of v; work on the transpose so each rotation
  // touches two contiguous rows.
  Matrix vt = v.transposed();
  ql_implicit(d, e, &vt, opts.sweeps_per_dim * n);

  const auto order = descending_order(d);
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = vt.row(order[k]);
    out.values[k] = d[order[k]];

    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(src[i]) > std::abs(src[lead])) lead = i;
    const double sign = src[lead] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * src[i];
  }
  return out;
}

std::vector<double> sym_eigenvalues(const SymMatrix& a, const EigOptions& opts) {
  require_usable(a);
  const std::size_t n = a.dim();
  Matrix v = a.to_dense();
  std::vector<double> d(n);
  std::vector<double> e(n);
  reduce(v, d, e);
  for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
  e[0] = 0.0;
  ql_implicit(d, e, nullptr, opts.sweeps_per_dim * n);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

EigenDecomposition sym_eig_leading(const SymMatrix& a,
                                   const std::function<std::size_t(std::span<const double>)>& select,
                                   const EigOptions& opts) {
  require_usable(a);
  const std::size_t n = a.dim();
  Matrix v = a.to_dense();
  std::vector<double> h(n);
  std::vector<double> e(n);
  reduce(v, h, e);
  std::vector<double> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = v(j, j);
  e[0] = 0.0;

  EigenDecomposition out;
  out.values = diag;
  {
    std::vector<double> ework = e;
    ql_implicit(out.values, ework, nullptr, opts.sweeps_per_dim * n);
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  const std::size_t k = std::min(select(out.values), n);
  out.vectors = Matrix(n, k);
  if (k == 0) return out;

  const Tridiagonal t{diag, e};
  std::vector<std::vector<double>> ys;
  if (!tridiagonal_vectors(t, std::span<const double>(out.values).first(k), ys)) {
    auto full = sym_eig(a, opts);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < k; ++c) out.vectors(i, c) = full.vectors(i, c);
    return out;
  }

  for (std::size_t c = 0; c < k; ++c) {
    auto& y = ys[c];
    // x = R_{n-1} ... R_1 y with R_m = I - u u^T / h_m, u = v(0..m-1, m).
    for (std::size_t m = 1; m < n; ++m) {
      if (h[m] == 0.0) continue;
      double g = 0.0;
      for (std::size_t r = 0; r < m; ++r) g += v(r, m) * y[r];
      g /= h[m];
      for (std::size_t r = 0; r < m; ++r) y[r] -= g * v(r, m);
    }
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(y[i]) > std::abs(y[lead])) lead = i;
    const double sign = y[lead] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = sign * y[i];
  }
  return out;
}

double lambda_max(const SymMatrix& a) { return sym_eigenvalues(a).front(); }
double lambda_min(const SymMatrix& a) { return sym_eigenvalues(a).back(); }

EigResiduals eig_residuals(const SymMatrix& a, const EigenDecomposition& eig) {
  const std::size_t n = a.dim();
  EigResiduals r;
  for (std::size_t k = 0; k < n; ++k) {
    const auto vk = eig.vector(k);
    auto av = a.multiply(vk);
    for (std::size_t i = 0; i < n; ++i) av[i] -= eig.values[k] * vk[i];
    r.max_residual = std::max(r.max_residual, norm2(av));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < n; ++k) g += eig.vectors(k, i) * eig.vectors(k, j);
      r.orthogonality = std::max(r.orthogonality, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return r;
}

SymMatrix recompose(const Matrix& vectors, std::span<const double> weights) {
  const std::size_t n = vectors.rows();
  SymMatrix out(n);
  auto packed = out.packed();
  std::vector<double> col(n);
  const std::size_t count = std::min(weights.size(), vectors.cols());
  for (std::size_t k = count; k < weights.size(); ++k)
    if (weights[k] != 0.0) throw InvalidInput("recompose: nonzero weight without a vector");
  for (std::size_t k = 0; k < count; ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) col[i] = vectors(i, k);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * col[i];
      for (std::size_t j = 0; j <= i; ++j) packed[idx++] += wi * col[j];
    }
  }
  return out;
}

}  // namespace spca
