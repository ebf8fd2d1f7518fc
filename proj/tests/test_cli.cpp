#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spca/io.hpp"
#include "spca/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("spca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  // Runs the binary with stdout and stderr captured to files in `dir`.
  int run(const std::string& args) {
    const std::string cmd = std::string(SPCA_CLI_PATH) + " " + args + " >" + (dir / "stdout.txt").string() +
                            " 2>" + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return spca::read_text_file(dir / "stdout.txt"); }
  std::string err() const { return spca::read_text_file(dir / "stderr.txt"); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  json read_json(const std::string& name) const { return json::parse(spca::read_text_file(dir / name)); }

  void generate_and_observe() {
    ASSERT_EQ(run("generate --d 20 --s 4 --gap 20 --seed 3 --out " + dir.string()), 0) << err();
    ASSERT_EQ(run("observe --truth " + path("m_star.csv") + " --p 0.9 --seed 4 --out " + dir.string()), 0) << err();
  }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, GenerateWritesTruth) {
  ASSERT_EQ(run("generate --d 20 --s 4 --gap 20 --seed 3 --out " + dir.string()), 0) << err();
  const json gt = read_json("ground_truth.json");
  EXPECT_EQ(gt.at("d").get<int>(), 20);
  EXPECT_EQ(gt.at("support").size(), 4u);
  EXPECT_NEAR(gt.at("spectral_gap").get<double>(), 20.0, 1e-9);
  std::ifstream in(path("m_star.csv"));
  EXPECT_EQ(spca::read_matrix_csv(in).dim(), 20u);
  // Same seed, same bytes.
  const std::string first = spca::read_text_file(path("m_star.csv"));
  ASSERT_EQ(run("generate --d 20 --s 4 --gap 20 --seed 3 --out " + dir.string()), 0);
  EXPECT_EQ(spca::read_text_file(path("m_star.csv")), first);
}

TEST_F(Cli, ObserveSolveWitnessTheoryPipeline) {
  generate_and_observe();
  std::ifstream mask_in(path("mask.csv"));
  EXPECT_EQ(spca::read_mask_csv(mask_in).dim(), 20u);

  ASSERT_EQ(run("solve --matrix " + path("m.csv") + " --rho 0.1 --out " + dir.string()), 0) << err();
  EXPECT_NE(out().find("converged=true"), std::string::npos);
  const json sol = read_json("solution.json");
  EXPECT_TRUE(sol.at("converged").get<bool>());
  const json gt = read_json("ground_truth.json");
  EXPECT_EQ(sol.at("support"), gt.at("support"));

  ASSERT_EQ(run("witness --matrix " + path("m.csv") + " --truth " + path("m_star.csv") + " --rho 0.1 --certify --out " +
                dir.string()),
            0)
      << err();
  const json w = read_json("witness.json");
  EXPECT_EQ(w.at("rho").get<double>(), 0.1);
  EXPECT_NE(out().find("support_match="), std::string::npos);

  ASSERT_EQ(run("theory --truth " + path("m_star.csv") + " --p 0.9 --B 5 --sigma-normal 0.1 --out " + dir.string()), 0)
      << err();
  const json th = read_json("theory.json");
  EXPECT_EQ(th["inputs"]["rho"].get<double>(), 0.1);
  EXPECT_NEAR(th["inputs"]["sigma2"].get<double>(), (spca::NoiseSpec{5.0, 0.1}).variance(), 1e-15);
}

TEST_F(Cli, WitnessWithExplicitSupport) {
  generate_and_observe();
  const json gt = read_json("ground_truth.json");
  std::string support, signs;
  for (std::size_t k = 0; k < gt["support"].size(); ++k) {
    const std::size_t i = gt["support"][k].get<std::size_t>();
    support += (k ? "," : "") + std::to_string(i);
    signs += (k ? "," : "") + std::string(gt["u1"][i - 1].get<double>() > 0 ? "1" : "-1");
  }
  ASSERT_EQ(run("witness --matrix " + path("m.csv") + " --support " + support + " --signs " + signs + " --out " +
                dir.string()),
            0)
      << err();
  EXPECT_EQ(read_json("witness.json").at("support"), gt.at("support"));
}

TEST_F(Cli, UnconvergedSolveExitsThree) {
  generate_and_observe();
  EXPECT_EQ(run("solve --matrix " + path("m.csv") + " --max-iter 2 --out " + dir.string()), 3);
  EXPECT_NE(err().find("no convergence"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("solution.json")));
}

TEST_F(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("solve"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("generate --d 5 --s 9 --out " + dir.string()), 2);
  generate_and_observe();
  EXPECT_EQ(run("observe --truth " + path("m_star.csv") + " --p 1.5 --out " + dir.string()), 2);
  EXPECT_EQ(run("solve --matrix " + path("m.csv") + " --rho -1 --out " + dir.string()), 2);
  EXPECT_EQ(run("witness --matrix " + path("m.csv") + " --out " + dir.string()), 2);
  EXPECT_EQ(run("witness --matrix " + path("m.csv") + " --support 1,99 --signs 1,1 --out " + dir.string()), 2);
  spca::write_text_file(dir / "bad.csv", "1,2\n3\n");
  EXPECT_EQ(run("solve --matrix " + path("bad.csv") + " --out " + dir.string()), 2);
  EXPECT_NE(err().find("invalid input"), std::string::npos);
  spca::write_text_file(dir / "e2.cfg", "mode = exp2\n");
  EXPECT_EQ(run("exp1 --config " + path("e2.cfg") + " --out " + dir.string()), 2);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(out().find("generate"), std::string::npos);
}

TEST_F(Cli, ExperimentFromConfig) {
  spca::write_text_file(dir / "e1.cfg", "mode = exp1\nlayout = grid\nd = 20\ns = 5\np = 0.5,0.9\ntrials = 3\n");
  ASSERT_EQ(run("exp1 --config " + path("e1.cfg") + " --threads 2 --seed 5 --out " + dir.string()), 0) << err();
  const std::string trials = spca::read_text_file(dir / "trials.csv");
  EXPECT_EQ(std::count(trials.begin(), trials.end(), '\n'), 7);
  EXPECT_TRUE(fs::exists(path("summary.csv")));
  EXPECT_TRUE(fs::exists(path("recovery_vs_p.svg")));
}

TEST_F(Cli, CovSelectsColumns) {
  std::ostringstream t;
  t << "a,b,c,d\n";
  const double rows[][4] = {{1, 1.1, 0.1, 0.0}, {2, 2.2, -0.1, 0.3}, {-1, -0.9, 0.0, -0.2},
                            {0.5, 0.4, 0.2, 0.1}, {-2, -2.1, -0.2, 0.0}, {1.5, 1.4, 0.1, -0.1}};
  for (const auto& r : rows) t << r[0] << ',' << r[1] << ",NA," << r[3] << '\n';
  spca::write_text_file(dir / "table.csv", t.str());
  ASSERT_EQ(run("cov --input " + path("table.csv") + " --rho 0.05 --out " + dir.string()), 0) << err();
  const json j = read_json("support.json");
  EXPECT_EQ(j.at("selected"), json({"a", "b"}));
  EXPECT_EQ(j.at("empty_columns"), json({"c"}));
}
