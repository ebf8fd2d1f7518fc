#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

// Planted model M* = sum_k lambda_k u_k u_k^T with a sparse leading
// eigenvector u_1 supported exactly on `support`.
struct GroundTruth {
  std::size_t d = 0;
  std::size_t s = 0;
  IndexSet support;
  std::vector<double> eigenvalues;  // descending, eigenvalues[0] = lambda_1
  Matrix eigenvectors;              // column k is u_{k+1}
  SymMatrix m_star;

  double spectral_gap() const { return eigenvalues.size() > 1 ? eigenvalues[0] - eigenvalues[1] : 0.0; }
  std::vector<double> u1() const { return eigenvectors.column(0); }
  // sign(u_{1,i}) for i in support, in support order.
  std::vector<double> u1_signs() const;
};

// Zero-mean normal with standard deviation `sigma_normal`, conditioned on
// [-bound, bound]. The recovery theory consumes the variance of the
// truncated law, not sigma_normal.
struct NoiseSpec {
  double bound = 0.0;
  double sigma_normal = 0.0;

  double variance() const;
};

// Symmetric boolean d x d mask with packed storage matching SymMatrix.
class SymMask {
 public:
  SymMask() = default;
  explicit SymMask(std::size_t dim, bool fill = false);

  std::size_t dim() const noexcept { return dim_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[SymMatrix::index(i, j)] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { bits_[SymMatrix::index(i, j)] = v ? 1 : 0; }

  // Fraction of the d*d matrix entries that are observed.
  double observed_fraction() const;
  // Fraction of the d(d+1)/2 upper-triangle entries (diagonal included).
  double observed_fraction_upper() const;

  friend bool operator==(const SymMask&, const SymMask&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Zero-filled observed matrix M with M_ij = delta_ij (M*_ij + eps_ij).
struct Observation {
  SymMatrix m;
  SymMask mask;
  double p = 1.0;
};

// lambda_2..lambda_d iid N(0,1) sorted descending, lambda_1 = lambda_2 + gap,
// u_1 on a uniformly random support of size s with entries of magnitude at
// least 1/(2 sqrt s), u_2..u_d completing an orthonormal basis.
// Deterministic in `seed`. Throws InvalidInput (s == 0, s > d, gap <= 0) or
// GenerationFailed.
GroundTruth generate_ground_truth(std::size_t d, std::size_t s, double gap, std::uint64_t seed);

// Builds a GroundTruth record around a caller-supplied M* whose leading
// eigenvector defines the support (entries with |u_1i| > zero_tol).
GroundTruth ground_truth_from_matrix(const SymMatrix& m_star, double zero_tol = 1e-12);

// Independently for each i <= j: eps_ij ~ truncated normal, delta_ij ~
// Bernoulli(p). The Bernoulli draw is [U_ij < p] with U_ij from the seeded
// stream, so for a fixed seed the masks are nested in p.
Observation sample_observation(const SymMatrix& m_star, double p, const NoiseSpec& noise,
                               std::uint64_t seed);
inline Observation sample_observation(const GroundTruth& gt, double p, const NoiseSpec& noise,
                                      std::uint64_t seed) {
  return sample_observation(gt.m_star, p, noise, seed);
}

// SplitMix64-based stream key: mixes the master seed with a list of
// integer coordinates (cell parameters, trial index, ...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

// n x m data table with missing cells.
struct DataTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::optional<double>>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return column_names.size(); }
};

struct IncompleteCovariance {
  SymMatrix cov;
  SymMask mask;
  double observed_fraction = 0.0;
  // Columns with no observed rows; their rows/columns are fully masked.
  std::vector<std::size_t> empty_columns;
};

// Pairwise-complete sample covariance: entry (j,k) uses only rows where both
// columns are present, with a (count - 1) denominator. Pairs with fewer than
// two joint observations are masked and zero.
IncompleteCovariance incomplete_covariance(const DataTable& table);

}  // namespace spca
