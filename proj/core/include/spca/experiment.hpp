#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spca/sdp_solver.hpp"
#include "spca/synth.hpp"

namespace spca {

enum class ExperimentMode { exp1, exp2 };
enum class GridLayout { slices, grid };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::exp1;
  GridLayout layout = GridLayout::slices;
  std::vector<std::size_t> d_list{20, 50, 100};
  std::vector<std::size_t> s_list{5, 10, 20};
  std::vector<double> gap_list{20.0};
  std::vector<double> p_list{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> rho_list{0.1};
  std::vector<double> sigma_normal_list{0.1};
  double b = 5.0;
  std::size_t trials = 30;
  std::uint64_t master_seed = 1;
  // Slice layout: d = slice_d with every s, and s = slice_s with every d.
  std::size_t slice_d = 100;
  std::size_t slice_s = 10;
  unsigned threads = 1;
  // rho is taken from rho_list per cell.
  SdpConfig solver;
  bool certify = true;

  static ExperimentConfig experiment1_defaults();
  static ExperimentConfig experiment2_defaults();

  // Throws InvalidInput on empty lists, trials == 0, p outside (0,1), ...
  void validate() const;
};

// Overrides fields from flat key = value pairs. Keys: mode, layout, d, s,
// gap, p, rho, sigma_normal, B, trials, seed, slice_d, slice_s, threads,
// tol, max_iter, eta, certify. List values are comma separated.
void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);

struct CellKey {
  std::size_t d = 0;
  std::size_t s = 0;
  double gap = 0.0;
  double sigma_normal = 0.0;
  double p = 0.0;
  double rho = 0.0;
};

struct TrialRecord {
  CellKey cell;
  double b = 0.0;
  double sigma2 = 0.0;  // variance of the truncated noise
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool recovered = false;
  std::size_t support_size = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool certified = false;
  double rescaled = 0.0;
};

// Cells in canonical order (layout-dependent for exp1).
std::vector<CellKey> experiment_cells(const ExperimentConfig& cfg);

// Seeds: ground truth from (master, d, s, gap, trial); observation from that
// and sigma_normal. p and rho do not enter, so curves over p and rho are
// paired comparisons on the same instances.
std::uint64_t trial_truth_seed(std::uint64_t master, const CellKey& c, std::size_t trial);
std::uint64_t trial_observation_seed(std::uint64_t truth_seed, double sigma_normal);

TrialRecord run_trial(const ExperimentConfig& cfg, const CellKey& cell, std::size_t trial);

// One record per (cell, trial) in canonical order, independent of threads.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

struct CellSummary {
  CellKey cell;
  std::size_t trials = 0;
  double recovery_rate = 0.0;
  double certified_rate = 0.0;
  double mean_rescaled = 0.0;
  std::size_t unconverged = 0;
};

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

// Experiment 2: best recovery rate over rho for each (d, s, gap, sigma_normal, p).
struct BestOverRho {
  CellKey cell;  // cell.rho is the maximizing rho (first on ties)
  double recovery_rate = 0.0;
};
std::vector<BestOverRho> best_over_rho(const std::vector<CellSummary>& cells);

std::string trials_csv(const std::vector<TrialRecord>& records);
std::string summary_csv(const std::vector<CellSummary>& cells);
std::string best_csv(const std::vector<BestOverRho>& best);

// Writes trials.csv, summary.csv (plus best.csv for exp2) and SVG plots.
// Returns the written paths.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentConfig& cfg,
                                                            const std::vector<TrialRecord>& records,
                                                            const std::filesystem::path& out_dir);

struct DataModeResult {
  IncompleteCovariance cov;
  SdpSolution solution;
  std::vector<std::string> selected;  // names of the columns in the support
};

DataModeResult run_data_mode(const DataTable& table, const SdpConfig& cfg);
std::string data_mode_json(const DataModeResult& r, const DataTable& table);

}  // namespace spca
