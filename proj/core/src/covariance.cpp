#include <cmath>

#include "spca/error.hpp"
#include "spca/synth.hpp"

namespace spca {

IncompleteCovariance incomplete_covariance(const DataTable& table) {
  const std::size_t n = table.n_rows();
  const std::size_t m = table.n_cols();
  if (n < 2) throw InvalidInput("incomplete_covariance: need at least two rows");
  if (m == 0) throw InvalidInput("incomplete_covariance: table has no columns");
  for (const auto& row : table.rows)
    if (row.size() != m) throw InvalidInput("incomplete_covariance: ragged table");

  IncompleteCovariance out{SymMatrix(m), SymMask(m), 0.0, {}};
  for (std::size_t j = 0; j < m; ++j) {
    bool any = false;
    for (const auto& row : table.rows) any = any || row[j].has_value();
    if (!any) out.empty_columns.push_back(j);
  }

  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      std::size_t count = 0;
      double mean_j = 0.0;
      double mean_k = 0.0;
      for (const auto& row : table.rows) {
        if (row[j] && row[k]) {
          ++count;
          mean_j += *row[j];
          mean_k += *row[k];
        }
      }
      if (count < 2) continue;
      mean_j /= static_cast<double>(count);
      mean_k /= static_cast<double>(count);
      double acc = 0.0;
      for (const auto& row : table.rows)
        if (row[j] && row[k]) acc += (*row[j] - mean_j) * (*row[k] - mean_k);
      out.cov.set(j, k, acc / static_cast<double>(count - 1));
      out.mask.set(j, k, true);
    }
  }
  out.observed_fraction = out.mask.observed_fraction();
  return out;
}

}  // namespace spca
