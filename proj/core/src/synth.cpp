#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "spca/error.hpp"
#include "spca/linalg.hpp"
#include "spca/synth.hpp"

namespace spca {
namespace {

constexpr int kMagnitudeResampleCap = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double truncated_normal(std::mt19937_64& rng, const NoiseSpec& noise) {
  if (noise.bound == 0.0 || noise.sigma_normal == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, noise.sigma_normal);
  for (;;) {
    const double x = normal(rng);
    if (std::abs(x) <= noise.bound) return x;
  }
}

// Orthonormal completion of `first` using Gaussian vectors and two passes of
// modified Gram-Schmidt.
Matrix complete_basis(const std::vector<double>& first, std::mt19937_64& rng) {
  const std::size_t d = first.size();
  Matrix basis(d, d);
  std::vector<std::vector<double>> cols;
  cols.reserve(d);
  cols.push_back(first);

  std::normal_distribution<double> normal(0.0, 1.0);
  while (cols.size() < d) {
    std::vector<double> v(d);
    for (double& x : v) x = normal(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : cols) {
        const double proj = dot(v, q);
        for (std::size_t i = 0; i < d; ++i) v[i] -= proj * q[i];
      }
    }
    const double nv = norm2(v);
    // Degenerate draw (numerically inside the current span); draw again.
    if (nv < 1e-8) continue;
    for (double& x : v) x /= nv;
    cols.push_back(std::move(v));
  }
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) basis(i, k) = cols[k][i];
  return basis;
}

}  // namespace

std::vector<double> GroundTruth::u1_signs() const {
  std::vector<double> signs;
  signs.reserve(support.size());
  for (std::size_t i : support) signs.push_back(eigenvectors(i, 0) < 0.0 ? -1.0 : 1.0);
  return signs;
}

double NoiseSpec::variance() const {
  if (bound == 0.0 || sigma_normal == 0.0) return 0.0;
  const double beta = bound / sigma_normal;
  const double phi = std::exp(-0.5 * beta * beta) / std::sqrt(2.0 * std::numbers::pi);
  const double mass = std::erf(beta / std::numbers::sqrt2);
  return sigma_normal * sigma_normal * (1.0 - 2.0 * beta * phi / mass);
}

SymMask::SymMask(std::size_t dim, bool fill) : dim_(dim), bits_(dim * (dim + 1) / 2, fill ? 1 : 0) {}

double SymMask::observed_fraction() const {
  if (dim_ == 0) return 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) count += (*this)(i, j) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(dim_ * dim_);
}

double SymMask::observed_fraction_upper() const {
  if (bits_.empty()) return 0.0;
  const auto count = std::count(bits_.begin(), bits_.end(), std::uint8_t{1});
  return static_cast<double>(count) / static_cast<double>(bits_.size());
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

GroundTruth generate_ground_truth(std::size_t d, std::size_t s, double gap, std::uint64_t seed) {
  if (d == 0) throw InvalidInput("generate_ground_truth: d must be positive");
  if (s == 0 || s > d) throw InvalidInput("generate_ground_truth: need 1 <= s <= d");
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw InvalidInput("generate_ground_truth: spectral gap must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  GroundTruth gt;
  gt.d = d;
  gt.s = s;

  // Spectrum.
  std::vector<double> tail(d - 1);
  for (double& x : tail) x = normal(rng);
  std::sort(tail.begin(), tail.end(), std::greater<>());
  gt.eigenvalues.reserve(d);
  gt.eigenvalues.push_back(d > 1 ? tail.front() + gap : gap);
  gt.eigenvalues.insert(gt.eigenvalues.end(), tail.begin(), tail.end());

  // Support.
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  gt.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(gt.support.begin(), gt.support.end());

  // Leading eigenvector: magnitudes in [1/(2 sqrt s), 1/sqrt s], random signs.
  const double floor = 1.0 / (2.0 * std::sqrt(static_cast<double>(s)));
  std::uniform_real_distribution<double> magnitude(floor, 2.0 * floor);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> u1(d, 0.0);
  bool accepted = false;
  for (int attempt = 0; attempt < kMagnitudeResampleCap && !accepted; ++attempt) {
    std::vector<double> vals(s);
    for (double& v : vals) v = magnitude(rng) * (coin(rng) ? 1.0 : -1.0);
    const double nrm = norm2(vals);
    double smallest = 1.0;
    for (double& v : vals) {
      v /= nrm;
      smallest = std::min(smallest, std::abs(v));
    }
    if (smallest >= floor) {
      std::fill(u1.begin(), u1.end(), 0.0);
      for (std::size_t k = 0; k < s; ++k) u1[gt.support[k]] = vals[k];
      accepted = true;
    }
  }
  if (!accepted)
    throw GenerationFailed("generate_ground_truth: magnitude floor not met after resample cap");

  gt.eigenvectors = complete_basis(u1, rng);
  // The first column must keep its exact zeros off the support.
  for (std::size_t i = 0; i < d; ++i) gt.eigenvectors(i, 0) = u1[i];

  gt.m_star = recompose(gt.eigenvectors, gt.eigenvalues);
  return gt;
}

GroundTruth ground_truth_from_matrix(const SymMatrix& m_star, double zero_tol) {
  const auto eig = sym_eig(m_star);
  GroundTruth gt;
  gt.d = m_star.dim();
  gt.eigenvalues = eig.values;
  gt.eigenvectors = eig.vectors;
  for (std::size_t i = 0; i < gt.d; ++i) {
    if (std::abs(gt.eigenvectors(i, 0)) > zero_tol) {
      gt.support.push_back(i);
    } else {
      gt.eigenvectors(i, 0) = 0.0;
    }
  }
  gt.s = gt.support.size();
  gt.m_star = m_star;
  return gt;
}

Observation sample_observation(const SymMatrix& m_star, double p, const NoiseSpec& noise,
                               std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("sample_observation: p must lie in (0, 1]");
  if (!(noise.bound >= 0.0) || !(noise.sigma_normal >= 0.0))
    throw InvalidInput("sample_observation: noise parameters must be nonnegative");

  const std::size_t d = m_star.dim();
  // Separate streams: the mask draws do not depend on how many rejections the
  // noise sampler needed.
  std::mt19937_64 noise_rng(derive_seed(seed, {1}));
  std::mt19937_64 mask_rng(derive_seed(seed, {2}));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Observation obs{SymMatrix(d), SymMask(d), p};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double eps = truncated_normal(noise_rng, noise);
      const bool observed = uniform(mask_rng) < p;
      if (observed) {
        obs.m.set(i, j, m_star(i, j) + eps);
        obs.mask.set(i, j, true);
      }
    }
  }
  return obs;
}

}  // namespace spca
