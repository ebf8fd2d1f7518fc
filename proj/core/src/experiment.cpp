#include "spca/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spca/error.hpp"
#include "spca/io.hpp"
#include "spca/svg_plot.hpp"
#include "spca/theory.hpp"
#include "spca/witness.hpp"

namespace spca {
namespace {

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(std::stod(item, &used));
      } else {
        if (item.front() == '-') throw std::invalid_argument("negative");
        out.push_back(static_cast<T>(std::stoull(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInput("config: bad value for " + key + ": '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidInput("config: empty list for " + key);
  return out;
}

template <typename T>
T parse_scalar(const std::string& key, const std::string& value) {
  const auto v = parse_list<T>(key, value);
  if (v.size() != 1) throw InvalidInput("config: " + key + " takes a single value");
  return v.front();
}

void append_csv(std::ostringstream& o, double v) { o << ',' << format_double(v); }

}  // namespace

ExperimentConfig ExperimentConfig::experiment1_defaults() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::experiment2_defaults() {
  ExperimentConfig c;
  c.mode = ExperimentMode::exp2;
  c.layout = GridLayout::grid;
  c.d_list = {100};
  c.s_list = {50};
  c.gap_list = {10.0, 30.0, 50.0};
  c.sigma_normal_list = {0.1, 0.3, 0.5};
  c.rho_list = {0.1, 0.01};
  return c;
}

void ExperimentConfig::validate() const {
  if (d_list.empty() || s_list.empty() || gap_list.empty() || p_list.empty() || rho_list.empty() ||
      sigma_normal_list.empty())
    throw InvalidInput("experiment: every parameter list must be nonempty");
  if (trials == 0) throw InvalidInput("experiment: trials must be >= 1");
  for (double p : p_list)
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("experiment: p values must lie in (0, 1)");
  for (double g : gap_list)
    if (!(g > 0.0)) throw InvalidInput("experiment: gaps must be > 0");
  for (double r : rho_list)
    if (!(r >= 0.0)) throw InvalidInput("experiment: rho values must be >= 0");
  for (double sn : sigma_normal_list)
    if (!(sn >= 0.0)) throw InvalidInput("experiment: sigma_normal must be >= 0");
  for (std::size_t d : d_list)
    if (d == 0) throw InvalidInput("experiment: d must be >= 1");
  for (std::size_t s : s_list)
    if (s == 0) throw InvalidInput("experiment: s must be >= 1");
  if (mode == ExperimentMode::exp1 && layout == GridLayout::slices) {
    if (std::find(d_list.begin(), d_list.end(), slice_d) == d_list.end() ||
        std::find(s_list.begin(), s_list.end(), slice_s) == s_list.end())
      throw InvalidInput("experiment: slices layout needs slice_d in d and slice_s in s (or layout = grid)");
  }
  if (!(b >= 0.0)) throw InvalidInput("experiment: B must be >= 0");
  if (threads == 0) throw InvalidInput("experiment: threads must be >= 1");
  SdpConfig probe = solver;
  probe.rho = 0.0;
  probe.validate();
  if (experiment_cells(*this).empty()) throw InvalidInput("experiment: no cell has s <= d");
}

void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "mode") {
      if (value == "exp1") {
        cfg.mode = ExperimentMode::exp1;
      } else if (value == "exp2") {
        cfg.mode = ExperimentMode::exp2;
      } else {
        throw InvalidInput("config: mode must be exp1 or exp2");
      }
    } else if (key == "layout") {
      if (value == "slices") {
        cfg.layout = GridLayout::slices;
      } else if (value == "grid") {
        cfg.layout = GridLayout::grid;
      } else {
        throw InvalidInput("config: layout must be slices or grid");
      }
    } else if (key == "d") {
      cfg.d_list = parse_list<std::size_t>(key, value);
    } else if (key == "s") {
      cfg.s_list = parse_list<std::size_t>(key, value);
    } else if (key == "gap") {
      cfg.gap_list = parse_list<double>(key, value);
    } else if (key == "p") {
      cfg.p_list = parse_list<double>(key, value);
    } else if (key == "rho") {
      cfg.rho_list = parse_list<double>(key, value);
    } else if (key == "sigma_normal") {
      cfg.sigma_normal_list = parse_list<double>(key, value);
    } else if (key == "B") {
      cfg.b = parse_scalar<double>(key, value);
    } else if (key == "trials") {
      cfg.trials = parse_scalar<std::size_t>(key, value);
    } else if (key == "seed") {
      cfg.master_seed = parse_scalar<std::uint64_t>(key, value);
    } else if (key == "slice_d") {
      cfg.slice_d = parse_scalar<std::size_t>(key, value);
    } else if (key == "slice_s") {
      cfg.slice_s = parse_scalar<std::size_t>(key, value);
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(parse_scalar<std::size_t>(key, value));
    } else if (key == "tol") {
      cfg.solver.tol_primal = cfg.solver.tol_dual = parse_scalar<double>(key, value);
    } else if (key == "max_iter") {
      cfg.solver.max_iter = parse_scalar<std::size_t>(key, value);
    } else if (key == "eta") {
      cfg.solver.eta_support = parse_scalar<double>(key, value);
    } else if (key == "certify") {
      if (value != "true" && value != "false") throw InvalidInput("config: certify must be true or false");
      cfg.certify = value == "true";
    } else {
      throw InvalidInput("config: unknown key '" + key + "'");
    }
  }
}

std::vector<CellKey> experiment_cells(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  auto add = [&shapes](std::size_t d, std::size_t s) {
    if (s > d) return;
    if (std::find(shapes.begin(), shapes.end(), std::make_pair(d, s)) == shapes.end())
      shapes.emplace_back(d, s);
  };
  if (cfg.mode == ExperimentMode::exp1 && cfg.layout == GridLayout::slices) {
    for (std::size_t s : cfg.s_list) add(cfg.slice_d, s);
    for (std::size_t d : cfg.d_list) add(d, cfg.slice_s);
  } else {
    for (std::size_t d : cfg.d_list)
      for (std::size_t s : cfg.s_list) add(d, s);
  }

  std::vector<CellKey> cells;
  for (const auto& [d, s] : shapes)
    for (double gap : cfg.gap_list)
      for (double sn : cfg.sigma_normal_list)
        for (double rho : cfg.rho_list)
          for (double p : cfg.p_list) cells.push_back({d, s, gap, sn, p, rho});
  return cells;
}

std::uint64_t trial_truth_seed(std::uint64_t master, const CellKey& c, std::size_t trial) {
  return derive_seed(master, {c.d, c.s, bits(c.gap), trial});
}

std::uint64_t trial_observation_seed(std::uint64_t truth_seed, double sigma_normal) {
  return derive_seed(truth_seed, {bits(sigma_normal)});
}

TrialRecord run_trial(const ExperimentConfig& cfg, const CellKey& cell, std::size_t trial) {
  TrialRecord r;
  r.cell = cell;
  r.b = cfg.b;
  r.trial = trial;
  r.seed = trial_truth_seed(cfg.master_seed, cell, trial);
  const NoiseSpec noise{cfg.b, cell.sigma_normal};
  r.sigma2 = noise.variance();

  const GroundTruth gt = generate_ground_truth(cell.d, cell.s, cell.gap, r.seed);
  const Observation obs =
      sample_observation(gt, cell.p, noise, trial_observation_seed(r.seed, cell.sigma_normal));

  SdpConfig sc = cfg.solver;
  sc.rho = cell.rho;
  const SdpSolution sol = solve(obs.m, sc);
  r.converged = sol.converged;
  r.iterations = sol.iterations;
  r.support_size = sol.support.size();
  // Unconverged solves count as failures.
  r.recovered = sol.converged && sol.support == gt.support;

  if (cfg.certify && cell.rho > 0.0) {
    const WitnessTriple t = construct(obs.m, gt.support, gt.u1_signs(), cell.rho);
    r.certified = check(t, obs.m, gt.support, gt.u1_signs()).certified;
  }
  try {
    r.rescaled = rescaled_parameter(gt.m_star, gt.support, cell.p);
  } catch (const InvalidInput&) {
    r.rescaled = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto cells = experiment_cells(cfg);
  const std::size_t total = cells.size() * cfg.trials;
  std::vector<TrialRecord> out(total);

  auto job = [&](std::size_t k) { out[k] = run_trial(cfg, cells[k / cfg.trials], k % cfg.trials); };

  const unsigned workers = std::min<std::size_t>(cfg.threads, total);
  if (workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) job(k);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= total) return;
        try {
          job(k);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(total);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<CellSummary> out;
  for (const auto& r : records) {
    const bool same = !out.empty() && out.back().cell.d == r.cell.d && out.back().cell.s == r.cell.s &&
                      out.back().cell.gap == r.cell.gap &&
                      out.back().cell.sigma_normal == r.cell.sigma_normal &&
                      out.back().cell.p == r.cell.p && out.back().cell.rho == r.cell.rho;
    if (!same) out.push_back({r.cell, 0, 0.0, 0.0, 0.0, 0});
    auto& c = out.back();
    ++c.trials;
    c.recovery_rate += r.recovered ? 1.0 : 0.0;
    c.certified_rate += r.certified ? 1.0 : 0.0;
    c.mean_rescaled += r.rescaled;
    if (!r.converged) ++c.unconverged;
  }
  for (auto& c : out) {
    const double n = static_cast<double>(c.trials);
    c.recovery_rate /= n;
    c.certified_rate /= n;
    c.mean_rescaled /= n;
  }
  return out;
}

std::vector<BestOverRho> best_over_rho(const std::vector<CellSummary>& cells) {
  std::vector<BestOverRho> out;
  for (const auto& c : cells) {
    auto it = std::find_if(out.begin(), out.end(), [&](const BestOverRho& b) {
      return b.cell.d == c.cell.d && b.cell.s == c.cell.s && b.cell.gap == c.cell.gap &&
             b.cell.sigma_normal == c.cell.sigma_normal && b.cell.p == c.cell.p;
    });
    if (it == out.end()) {
      out.push_back({c.cell, c.recovery_rate});
    } else if (c.recovery_rate > it->recovery_rate) {
      it->cell.rho = c.cell.rho;
      it->recovery_rate = c.recovery_rate;
    }
  }
  return out;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream o;
  o << "d,s,gap,B,sigma_normal,sigma2,p,rho,trial,seed,recovered,support_size,iterations,converged,"
       "certified,rescaled\n";
  for (const auto& r : records) {
    o << r.cell.d << ',' << r.cell.s;
    append_csv(o, r.cell.gap);
    append_csv(o, r.b);
    append_csv(o, r.cell.sigma_normal);
    append_csv(o, r.sigma2);
    append_csv(o, r.cell.p);
    append_csv(o, r.cell.rho);
    o << ',' << r.trial << ',' << r.seed << ',' << (r.recovered ? 1 : 0) << ',' << r.support_size << ','
      << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.certified ? 1 : 0);
    append_csv(o, r.rescaled);
    o << '\n';
  }
  return o.str();
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream o;
  o << "d,s,gap,sigma_normal,p,rho,trials,recovery_rate,certified_rate,mean_rescaled,unconverged\n";
  for (const auto& c : cells) {
    o << c.cell.d << ',' << c.cell.s;
    append_csv(o, c.cell.gap);
    append_csv(o, c.cell.sigma_normal);
    append_csv(o, c.cell.p);
    append_csv(o, c.cell.rho);
    o << ',' << c.trials;
    append_csv(o, c.recovery_rate);
    append_csv(o, c.certified_rate);
    append_csv(o, c.mean_rescaled);
    o << ',' << c.unconverged << '\n';
  }
  return o.str();
}

std::string best_csv(const std::vector<BestOverRho>& best) {
  std::ostringstream o;
  o << "d,s,gap,sigma_normal,p,best_rho,recovery_rate\n";
  for (const auto& b : best) {
    o << b.cell.d << ',' << b.cell.s;
    append_csv(o, b.cell.gap);
    append_csv(o, b.cell.sigma_normal);
    append_csv(o, b.cell.p);
    append_csv(o, b.cell.rho);
    append_csv(o, b.recovery_rate);
    o << '\n';
  }
  return o.str();
}

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentConfig& cfg,
                                                            const std::vector<TrialRecord>& records,
                                                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    write_text_file(path, text);
    written.push_back(path);
  };

  const auto cells = summarize(records);
  emit("trials.csv", trials_csv(records));
  emit("summary.csv", summary_csv(cells));

  auto fmt_g = [](double v) {
    std::ostringstream o;
    o << v;
    return o.str();
  };

  if (cfg.mode == ExperimentMode::exp1) {
    // One line per (d, s, gap, sigma_normal, rho) family.
    LineChart by_p{"Exact recovery rate vs p", "p", "recovery rate", false, 0.0, 1.0, {}};
    LineChart by_r{"Exact recovery rate vs rescaled parameter", "rescaled parameter", "recovery rate",
                   true, 0.0, 1.0, {}};
    for (const auto& c : cells) {
      std::string label = "d=" + std::to_string(c.cell.d) + ", s=" + std::to_string(c.cell.s);
      if (cfg.gap_list.size() > 1) label += ", gap=" + fmt_g(c.cell.gap);
      if (cfg.rho_list.size() > 1) label += ", rho=" + fmt_g(c.cell.rho);
      if (cfg.sigma_normal_list.size() > 1) label += ", sn=" + fmt_g(c.cell.sigma_normal);
      if (by_p.series.empty() || by_p.series.back().label != label) {
        by_p.series.push_back({label, {}, {}});
        by_r.series.push_back({label, {}, {}});
      }
      by_p.series.back().x.push_back(c.cell.p);
      by_p.series.back().y.push_back(c.recovery_rate);
      by_r.series.back().x.push_back(c.mean_rescaled);
      by_r.series.back().y.push_back(c.recovery_rate);
    }
    emit("recovery_vs_p.svg", render_svg(by_p));
    emit("recovery_vs_rescaled.svg", render_svg(by_r));
  } else {
    const auto best = best_over_rho(cells);
    emit("best.csv", best_csv(best));
    for (double sn : cfg.sigma_normal_list) {
      LineChart chart{"Best recovery rate over rho, sigma_normal = " + fmt_g(sn), "p", "recovery rate",
                      false, 0.0, 1.0, {}};
      for (const auto& b : best) {
        if (b.cell.sigma_normal != sn) continue;
        std::string label = "gap=" + fmt_g(b.cell.gap);
        if (cfg.d_list.size() > 1 || cfg.s_list.size() > 1)
          label += " (d=" + std::to_string(b.cell.d) + ", s=" + std::to_string(b.cell.s) + ")";
        auto it = std::find_if(chart.series.begin(), chart.series.end(),
                               [&](const Series& s) { return s.label == label; });
        if (it == chart.series.end()) {
          chart.series.push_back({label, {}, {}});
          it = std::prev(chart.series.end());
        }
        it->x.push_back(b.cell.p);
        it->y.push_back(b.recovery_rate);
      }
      emit("recovery_sigma_" + fmt_g(sn) + ".svg", render_svg(chart));
    }
  }
  return written;
}

DataModeResult run_data_mode(const DataTable& table, const SdpConfig& cfg) {
  DataModeResult r;
  r.cov = incomplete_covariance(table);
  r.solution = solve(r.cov.cov, cfg);
  for (std::size_t i : r.solution.support) r.selected.push_back(table.column_names[i]);
  return r;
}

std::string data_mode_json(const DataModeResult& r, const DataTable& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.column_names.size();
  j["rows"] = table.n_rows();
  j["observed_fraction"] = r.cov.observed_fraction;
  nlohmann::ordered_json empty = nlohmann::ordered_json::array();
  for (std::size_t c : r.cov.empty_columns) empty.push_back(table.column_names[c]);
  j["empty_columns"] = empty;
  j["selected"] = r.selected;
  nlohmann::ordered_json diag = nlohmann::ordered_json::array();
  for (std::size_t i : r.solution.support) diag.push_back(r.solution.x_hat(i, i));
  j["selected_diag"] = diag;
  j["solution"] = nlohmann::ordered_json::parse(solution_json(r.solution));
  return j.dump(2) + "\n";
}

}  // namespace spca
