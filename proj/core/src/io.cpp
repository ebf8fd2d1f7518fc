#include "spca/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spca/error.hpp"

namespace spca {
namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InvalidInput("csv: line " + std::to_string(line_no) + ": not a finite number: '" + cell + "'");
  return v;
}

std::vector<std::vector<std::string>> read_rows(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

Matrix read_square(std::istream& is) {
  const auto rows = read_rows(is);
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("csv: empty matrix");
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw InvalidInput("csv: line " + std::to_string(i + 1) + " has " +
                         std::to_string(rows[i].size()) + " cells, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) a(i, j) = parse_number(rows[i][j], i + 1);
  }
  return a;
}

ordered_json index_list(const IndexSet& idx) {
  ordered_json a = ordered_json::array();
  for (std::size_t i : idx) a.push_back(i + 1);
  return a;
}

// NaN/Inf are not JSON numbers; emit them as strings.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string dump(const ordered_json& j) {
  // Doubles print as the shortest string that round-trips.
  return j.dump(2) + "\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& os, const SymMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_mask_csv(std::ostream& os, const SymMask& mask) {
  for (std::size_t i = 0; i < mask.dim(); ++i) {
    for (std::size_t j = 0; j < mask.dim(); ++j) {
      if (j) os << ',';
      os << (mask(i, j) ? '1' : '0');
    }
    os << '\n';
  }
}

SymMatrix read_matrix_csv(std::istream& is) { return SymMatrix::from_dense(read_square(is)); }

SymMask read_mask_csv(std::istream& is) {
  const Matrix a = read_square(is);
  const std::size_t n = a.rows();
  SymMask mask(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = a(i, j);
      if (v != 0.0 && v != 1.0) throw InvalidInput("mask csv: entries must be 0 or 1");
      if (v != a(j, i)) throw InvalidInput("mask csv: mask is not symmetric");
      if (j <= i) mask.set(i, j, v == 1.0);
    }
  }
  return mask;
}

DataTable read_table_csv(std::istream& is) {
  auto rows = read_rows(is);
  if (rows.empty()) throw InvalidInput("table csv: missing header row");
  DataTable t;
  t.column_names = rows.front();
  const std::size_t m = t.column_names.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != m)
      throw InvalidInput("table csv: line " + std::to_string(r + 1) + " has " +
                         std::to_string(rows[r].size()) + " cells, expected " + std::to_string(m));
    std::vector<std::optional<double>> row(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::string& cell = rows[r][j];
      if (cell.empty() || cell == "NA") continue;
      row[j] = parse_number(cell, r + 1);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string solution_json(const SdpSolution& sol) {
  ordered_json j;
  j["objective"] = num(sol.objective);
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["primal_residual"] = num(sol.primal_residual);
  j["dual_residual"] = num(sol.dual_residual);
  j["support"] = index_list(sol.support);
  ordered_json diag = ordered_json::array();
  for (double v : sol.x_hat.diagonal()) diag.push_back(num(v));
  j["diag"] = diag;
  return dump(j);
}

std::string witness_json(const WitnessReport& r, const WitnessTriple& t) {
  ordered_json j;
  j["rho"] = num(t.rho);
  j["support"] = index_list(t.support);
  j["lambda_hat"] = num(t.lambda_hat);
  j["x_hat"] = t.x_hat;
  j["w_hat"] = t.w_hat;
  j["conditions"] = {
      {"sign_match", {{"pass", r.sign_match}, {"worst_index", r.worst_sign_index}}},
      {"w_inf", {{"pass", r.w_inf_ok}, {"value", num(r.w_inf)}}},
      {"eig_equal",
       {{"pass", r.eig_equal},
        {"lambda_block", num(r.lambda_block)},
        {"lambda_full", num(r.lambda_full)},
        {"difference", num(r.eig_diff)}}},
      {"gap", {{"pass", r.gap_ok}, {"value", num(r.gap)}}},
  };
  j["certified"] = r.certified;
  return dump(j);
}

std::string theory_json(const TheoryReport& r) {
  ordered_json j;
  j["inputs"] = {{"p", num(r.inputs.p)},
                 {"sigma2", num(r.inputs.sigma2)},
                 {"B", num(r.inputs.b)},
                 {"rho", num(r.inputs.rho)},
                 {"c", num(r.inputs.c)},
                 {"d", r.d},
                 {"s", r.s}};
  j["lambda_bar"] = num(r.lambda_bar);
  const auto& mu = r.coherence;
  j["coherence"] = {{"mu0", num(mu.mu0)},
                    {"mu1", num(mu.mu1)},
                    {"mu2", num(mu.mu2)},
                    {"mu3", num(mu.mu3)},
                    {"mu1_degenerate", mu.mu1_degenerate},
                    {"mu2_degenerate", mu.mu2_degenerate},
                    {"mu3_degenerate", mu.mu3_degenerate},
                    {"in_range", {mu.mu0_in_range, mu.mu1_in_range, mu.mu2_in_range, mu.mu3_in_range}}};
  const auto& k = r.thm1.constants;
  j["constants"] = {{"c", num(k.c)},   {"R1", num(k.r1)}, {"R2", num(k.r2)}, {"R3", num(k.r3)},
                    {"R4", num(k.r4)}, {"R5", num(k.r5)}, {"R6", num(k.r6)}, {"K1", num(k.k1)},
                    {"K2", num(k.k2)}, {"K3", num(k.k3)}, {"K3_defined", k.k3_defined}};
  j["theorem1"] = {{"sign_margin", num(r.thm1.sign)},
                   {"dual_margin", num(r.thm1.dual)},
                   {"eig_margin", num(r.thm1.eig)},
                   {"eig_lhs", num(r.thm1.eig_lhs)},
                   {"eig_f1", num(r.thm1.eig_f1)},
                   {"eig_f2", num(r.thm1.eig_f2)},
                   {"all_hold", r.thm1.all_hold()},
                   {"success_prob_bound", num(r.thm1.success_prob_bound)}};
  const auto& c1 = r.cor1;
  j["corollary1"] = {{"r_mu0", num(c1.r_mu0)},     {"r_cross", num(c1.r_cross)},
                     {"r_comp", num(c1.r_comp)},   {"r_prob", num(c1.r_prob)},
                     {"r_rho", num(c1.r_rho)},     {"ok", {c1.ok_mu0, c1.ok_cross, c1.ok_comp, c1.ok_prob, c1.ok_rho}},
                     {"all_ok", c1.all_ok()}};
  if (r.cor2_defined) {
    const auto& c2 = r.cor2;
    j["corollary2"] = {{"a1", num(c2.a1)},
                       {"a2", num(c2.a2)},
                       {"sign_ratio_margin", num(c2.sign_ratio)},
                       {"sign_ratio_p_margin", num(c2.sign_ratio_p)},
                       {"noise_bound_margin", num(c2.noise_bound)},
                       {"rho_lower_margin", num(c2.rho_lower)},
                       {"rho_upper_margin", num(c2.rho_upper)},
                       {"gate_rhs", num(c2.gate_rhs)},
                       {"gate_margin", num(c2.gate)},
                       {"in_regime", c2.in_regime},
                       {"all_hold", c2.all_hold()}};
  } else {
    j["corollary2"] = nullptr;
  }
  j["rescaled_parameter"] = num(r.rescaled);
  return dump(j);
}

std::string ground_truth_json(const GroundTruth& gt) {
  ordered_json j;
  j["d"] = gt.d;
  j["s"] = gt.s;
  j["support"] = index_list(gt.support);
  j["spectral_gap"] = num(gt.spectral_gap());
  j["eigenvalues"] = gt.eigenvalues;
  j["u1"] = gt.u1();
  return dump(j);
}

std::map<std::string, std::string> parse_config(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw InvalidInput("config: line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(std::move(key), std::move(value)).second)
      throw InvalidInput("config: line " + std::to_string(line_no) + ": repeated key");
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  return parse_config(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spca
