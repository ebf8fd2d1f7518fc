// spca: command-line front end for the sparse PCA recovery library.
//
//   spca generate --d 50 --s 5 --gap 20 --seed 3 --out run/
//   spca observe  --truth run/m_star.csv --p 0.7 --seed 4 --out run/
//   spca solve    --matrix run/m.csv --rho 0.1 --out run/
//   spca witness  --matrix run/m.csv --truth run/m_star.csv --rho 0.1 --certify
//   spca theory   --truth run/m_star.csv --p 0.7 --rho 0.1
//   spca exp1     --config exp1.cfg --threads 4 --out exp1/
//   spca exp2     --out exp2/
//   spca cov      --input table.csv --rho 2
//
// Exit codes: 0 success, 2 invalid input, 3 non-convergence, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spca/error.hpp"
#include "spca/experiment.hpp"
#include "spca/io.hpp"
#include "spca/sdp_solver.hpp"
#include "spca/synth.hpp"
#include "spca/theory.hpp"
#include "spca/witness.hpp"

namespace fs = std::filesystem;
using namespace spca;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

struct Common {
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string config;
  std::string out = ".";
  unsigned threads = 0;
  std::optional<double> rho;
  std::optional<double> eta;
};

SymMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_matrix_csv(in);
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string matrix_csv(const SymMatrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

// Solver settings: defaults (rho = 0.1), then config file keys (tol,
// max_iter, eta, rho), then flags.
SdpConfig solver_config(const Common& c, double tol, std::size_t max_iter) {
  SdpConfig cfg;
  cfg.rho = 0.1;
  if (!c.config.empty()) {
    for (const auto& [k, v] : read_config_file(c.config)) {
      try {
        if (k == "rho") cfg.rho = std::stod(v);
        else if (k == "tol") cfg.tol_primal = cfg.tol_dual = std::stod(v);
        else if (k == "max_iter") cfg.max_iter = std::stoul(v);
        else if (k == "eta") cfg.eta_support = std::stod(v);
        else if (k == "tau") cfg.tau = std::stod(v);
        else throw InvalidInput("config: unknown solver key '" + k + "'");
      } catch (const std::logic_error&) {
        throw InvalidInput("config: bad value for '" + k + "': " + v);
      }
    }
  }
  if (c.rho) cfg.rho = *c.rho;
  if (c.eta) cfg.eta_support = *c.eta;
  if (tol > 0.0) cfg.tol_primal = cfg.tol_dual = tol;
  if (max_iter > 0) cfg.max_iter = max_iter;
  cfg.validate();
  return cfg;
}

std::vector<std::size_t> parse_support(const std::string& text, std::size_t d) {
  IndexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::logic_error&) {
      throw InvalidInput("--support: not an index: '" + item + "'");
    }
    if (pos != item.size() || v == 0) throw InvalidInput("--support: indices are 1-based: '" + item + "'");
    out.push_back(v - 1);
  }
  validate_index_set(out, d);
  return out;
}

std::vector<double> parse_signs(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "+" || item == "1" || item == "+1") out.push_back(1.0);
    else if (item == "-" || item == "-1") out.push_back(-1.0);
    else throw InvalidInput("--signs: expected +1 or -1, got '" + item + "'");
  }
  return out;
}

void print_indices(std::ostream& os, const IndexSet& idx) {
  os << '{';
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k] + 1;
  os << '}';
}

void add_common(CLI::App* sub, Common& c, bool seed, bool threads) {
  if (seed) {
    sub->add_option_function<std::uint64_t>(
           "--seed", [&c](const std::uint64_t& v) { c.seed = v; c.seed_set = true; }, "RNG seed");
  }
  sub->add_option("--config", c.config, "flat key = value file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory");
  if (threads) sub->add_option("--threads", c.threads, "worker threads");
  sub->add_option("--rho", c.rho, "l1 penalty");
  sub->add_option("--eta", c.eta, "support threshold on diag(X)");
}

int run_generate(const Common& c, std::size_t d, std::size_t s, double gap) {
  const GroundTruth gt = generate_ground_truth(d, s, gap, c.seed);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "m_star.csv", matrix_csv(gt.m_star));
  write_text_file(dir / "ground_truth.json", ground_truth_json(gt));
  std::cout << "d=" << d << " s=" << s << " gap=" << gt.spectral_gap() << " support=";
  print_indices(std::cout, gt.support);
  std::cout << "\nwrote " << (dir / "m_star.csv").string() << ", " << (dir / "ground_truth.json").string()
            << '\n';
  return 0;
}

int run_observe(const Common& c, const std::string& truth, double p, double b, double sigma_normal) {
  const SymMatrix m_star = load_matrix(truth);
  const NoiseSpec noise{b, sigma_normal};
  const Observation obs = sample_observation(m_star, p, noise, c.seed);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "m.csv", matrix_csv(obs.m));
  std::ostringstream mask;
  write_mask_csv(mask, obs.mask);
  write_text_file(dir / "mask.csv", mask.str());
  std::printf("p=%g observed=%.4f noise_variance=%.6g\n", p, obs.mask.observed_fraction(), noise.variance());
  return 0;
}

int run_solve(const Common& c, const std::string& matrix, double tol, std::size_t max_iter) {
  const SymMatrix m = load_matrix(matrix);
  const SdpConfig cfg = solver_config(c, tol, max_iter);
  const SdpSolution sol = solve(m, cfg);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "solution.json", solution_json(sol));
  write_text_file(dir / "x_hat.csv", matrix_csv(sol.x_hat));
  std::printf("objective=%.12g iterations=%zu converged=%s support=", sol.objective, sol.iterations,
              sol.converged ? "true" : "false");
  std::fflush(stdout);
  print_indices(std::cout, sol.support);
  std::cout << std::endl;
  if (!sol.converged) {
    std::fprintf(stderr, "spca solve: no convergence after %zu iterations (primal %.3g, dual %.3g)\n",
                 sol.iterations, sol.primal_residual, sol.dual_residual);
    return kExitNoConvergence;
  }
  return 0;
}

int run_witness(const Common& c, const std::string& matrix, const std::string& truth,
                const std::string& support_text, const std::string& signs_text, bool certify) {
  const SymMatrix m = load_matrix(matrix);
  IndexSet support;
  std::vector<double> signs;
  if (!truth.empty()) {
    const GroundTruth gt = ground_truth_from_matrix(load_matrix(truth));
    if (gt.d != m.dim()) throw InvalidInput("--truth and --matrix differ in dimension");
    support = gt.support;
    signs = gt.u1_signs();
  } else {
    if (support_text.empty() || signs_text.empty())
      throw InvalidInput("witness needs --truth, or --support with --signs");
    support = parse_support(support_text, m.dim());
    signs = parse_signs(signs_text);
  }
  const SdpConfig cfg = solver_config(c, 0.0, 0);
  const WitnessTriple t = construct(m, support, signs, cfg.rho);
  const WitnessReport r = check(t, m, support, signs);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "witness.json", witness_json(r, t));
  std::printf("sign_match=%d w_inf=%.6g eig_diff=%.3g gap=%.6g certified=%s\n", r.sign_match, r.w_inf,
              r.eig_diff, r.gap, r.certified ? "true" : "false");
  if (!certify) return 0;

  const SdpSolution sol = solve(m, cfg);
  if (!sol.converged) {
    std::fprintf(stderr, "spca witness: solver did not converge; refusing to compare\n");
    return kExitNoConvergence;
  }
  const CertifiedOutcome o = certify_solution(m, support, signs, cfg.rho, sol);
  std::printf("solver support_match=%s frobenius_gap=%.3g\n", o.support_match ? "true" : "false",
              o.frobenius_gap);
  return 0;
}

int run_theory(const Common& c, const std::string& truth, double p, double b, double sigma_normal,
               std::optional<double> sigma2, double cc) {
  const GroundTruth gt = ground_truth_from_matrix(load_matrix(truth));
  TheoryInputs in;
  in.p = p;
  in.b = b;
  in.sigma2 = sigma2 ? *sigma2 : NoiseSpec{b, sigma_normal}.variance();
  in.rho = c.rho.value_or(0.1);
  in.c = cc;
  const TheoryReport r = theory_report(gt.m_star, gt.support, gt.u1(), in);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "theory.json", theory_json(r));
  std::printf("margins: sign=%.6g dual=%.6g eig=%.6g  success_prob_bound=%.6g  rescaled=%.6g\n", r.thm1.sign,
              r.thm1.dual, r.thm1.eig, r.thm1.success_prob_bound, r.rescaled);
  return 0;
}

int run_exp(const Common& c, ExperimentMode mode, std::size_t trials) {
  ExperimentConfig cfg =
      mode == ExperimentMode::exp1 ? ExperimentConfig::experiment1_defaults() : ExperimentConfig::experiment2_defaults();
  if (!c.config.empty()) {
    apply_config(cfg, read_config_file(c.config));
    if (cfg.mode != mode) throw InvalidInput("config: mode does not match the subcommand");
  }
  if (c.seed_set) cfg.master_seed = c.seed;
  if (c.threads > 0) cfg.threads = c.threads;
  if (c.rho) cfg.rho_list = {*c.rho};
  if (c.eta) cfg.solver.eta_support = *c.eta;
  if (trials > 0) cfg.trials = trials;
  cfg.validate();

  const auto records = run_experiment(cfg);
  const auto paths = write_experiment_outputs(cfg, records, out_dir(c));
  std::size_t unconverged = 0;
  for (const auto& r : records) unconverged += r.converged ? 0 : 1;
  std::printf("%zu trials, %zu unconverged (counted as failures)\n", records.size(), unconverged);
  for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
  return 0;
}

int run_cov(const Common& c, const std::string& input, double tol, std::size_t max_iter) {
  std::ifstream in(input);
  if (!in) throw InvalidInput("cannot open " + input);
  const DataTable table = read_table_csv(in);
  Common cc = c;
  if (!cc.rho) cc.rho = 2.0;
  const SdpConfig cfg = solver_config(cc, tol, max_iter);
  const DataModeResult r = run_data_mode(table, cfg);
  const fs::path dir = out_dir(c);
  write_text_file(dir / "support.json", data_mode_json(r, table));
  std::printf("%zu rows x %zu columns, observed fraction %.4f\n", table.n_rows(), table.n_cols(),
              r.cov.observed_fraction);
  for (std::size_t k = 0; k < r.selected.size(); ++k) {
    const std::size_t i = r.solution.support[k];
    std::printf("  %-20s diag=%.6g\n", r.selected[k].c_str(), r.solution.x_hat(i, i));
  }
  if (!r.solution.converged) {
    std::fprintf(stderr, "spca cov: no convergence after %zu iterations\n", r.solution.iterations);
    return kExitNoConvergence;
  }
  if (r.selected.size() <= 1)
    std::fprintf(stderr, "warning: support has %zu column(s); rho may be too large\n", r.selected.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse PCA support recovery from incomplete noisy matrices"};
  app.require_subcommand(1);
  Common common;

  std::size_t d = 50, s = 5;
  double gap = 20.0;
  auto* gen = app.add_subcommand("generate", "planted sparse model M*");
  add_common(gen, common, true, false);
  gen->add_option("--d", d, "dimension");
  gen->add_option("--s", s, "support size");
  gen->add_option("--gap", gap, "lambda_1 - lambda_2");

  std::string truth, matrix, input, support_text, signs_text;
  double p = 0.9, b = 5.0, sigma_normal = 0.1, c_const = 1.0, tol = 0.0;
  std::optional<double> sigma2;
  std::size_t max_iter = 0, trials = 0;
  bool certify = false;

  auto* obs = app.add_subcommand("observe", "sample an incomplete noisy observation of M*");
  add_common(obs, common, true, false);
  obs->add_option("--truth", truth, "M* CSV")->required()->check(CLI::ExistingFile);
  obs->add_option("--p", p, "observation probability");
  obs->add_option("--B", b, "noise bound");
  obs->add_option("--sigma-normal", sigma_normal, "parent normal sd of the noise");

  auto* sol = app.add_subcommand("solve", "solve the l1-penalized SDP");
  add_common(sol, common, false, false);
  sol->add_option("--matrix", matrix, "observed matrix CSV")->required()->check(CLI::ExistingFile);
  sol->add_option("--tol", tol, "relative residual tolerance");
  sol->add_option("--max-iter", max_iter, "iteration cap");

  auto* wit = app.add_subcommand("witness", "build and check the primal-dual witness");
  add_common(wit, common, false, false);
  wit->add_option("--matrix", matrix, "observed matrix CSV")->required()->check(CLI::ExistingFile);
  auto* wt = wit->add_option("--truth", truth, "M* CSV (support and signs of u_1)")->check(CLI::ExistingFile);
  wit->add_option("--support", support_text, "1-based indices, comma separated")->excludes(wt);
  wit->add_option("--signs", signs_text, "+1/-1 per support index")->excludes(wt);
  wit->add_flag("--certify", certify, "also solve the SDP and compare");

  auto* th = app.add_subcommand("theory", "coherence, constants and recovery margins");
  add_common(th, common, false, false);
  th->add_option("--truth", truth, "M* CSV")->required()->check(CLI::ExistingFile);
  th->add_option("--p", p, "observation probability");
  th->add_option("--B", b, "noise bound");
  th->add_option("--sigma-normal", sigma_normal, "parent normal sd of the noise");
  th->add_option("--sigma2", sigma2, "noise variance (overrides --sigma-normal)");
  th->add_option("--c", c_const, "probability exponent");

  auto* e1 = app.add_subcommand("exp1", "Monte Carlo recovery over d, s, p");
  add_common(e1, common, true, true);
  e1->add_option("--trials", trials, "trials per cell");
  auto* e2 = app.add_subcommand("exp2", "Monte Carlo recovery over gap, noise, p; best over rho");
  add_common(e2, common, true, true);
  e2->add_option("--trials", trials, "trials per cell");

  auto* cov = app.add_subcommand("cov", "data mode: incomplete covariance then SDP support");
  add_common(cov, common, false, false);
  cov->add_option("--input", input, "table CSV with header; empty or NA is missing")
      ->required()
      ->check(CLI::ExistingFile);
  cov->add_option("--tol", tol, "relative residual tolerance");
  cov->add_option("--max-iter", max_iter, "iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) return run_generate(common, d, s, gap);
    if (*obs) return run_observe(common, truth, p, b, sigma_normal);
    if (*sol) return run_solve(common, matrix, tol, max_iter);
    if (*wit) return run_witness(common, matrix, truth, support_text, signs_text, certify);
    if (*th) return run_theory(common, truth, p, b, sigma_normal, sigma2, c_const);
    if (*e1) return run_exp(common, ExperimentMode::exp1, trials);
    if (*e2) return run_exp(common, ExperimentMode::exp2, trials);
    if (*cov) return run_cov(common, input, tol, max_iter);
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "spca: invalid input: %s\n", e.what());
    return kExitInvalid;
  } catch (const NoConvergence& e) {
    std::fprintf(stderr, "spca: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const RefusesToCertify& e) {
    std::fprintf(stderr, "spca: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spca: %s\n", e.what());
    return 1;
  }
  return 0;
}
