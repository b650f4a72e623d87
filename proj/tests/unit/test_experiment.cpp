#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdtg/experiment.hpp"
#include "test_support.hpp"

namespace sdtg {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdtg_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

ExperimentConfig small_config() {
  return parse_config({"--algorithm", "tgddm2", "--coarse", "1/2,1/3,1/4"});
}

TEST(Fractions, Parse) {
  EXPECT_DOUBLE_EQ(parse_fraction("1/27"), 1.0 / 27.0);
  EXPECT_DOUBLE_EQ(parse_fraction("0.5"), 0.5);
  EXPECT_DOUBLE_EQ(parse_fraction(" 3 "), 3.0);
  EXPECT_THROW((void)parse_fraction("1/0"), ConfigError);
  EXPECT_THROW((void)parse_fraction("abc"), ConfigError);
  EXPECT_THROW((void)parse_fraction(""), ConfigError);
}

TEST(FineRules, KnownSizes) {
  EXPECT_NEAR(fine_size(0.25, FineRule::Pow15), 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(fine_size(1.0 / 9.0, FineRule::Pow15), 1.0 / 27.0, 1e-15);
  EXPECT_NEAR(fine_size(1.0 / 16.0, FineRule::Pow15), 1.0 / 64.0, 1e-15);
  EXPECT_NEAR(fine_size(1.0 / 8.0, FineRule::Half), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(fine_size(1.0 / 16.0, FineRule::Pow125), 1.0 / 32.0, 1e-15);
}

TEST(Config, ParsesFlags) {
  const auto c = parse_config({"--algorithm", "ddm", "--elements", "minip1", "--deltaS", "1/3", "--deltaD", "2",
                               "--coarse", "1/4,1/9", "--fine-rule", "half", "--tol", "1e-8", "--max-iter", "50"});
  EXPECT_EQ(c.algorithm, Algorithm::Ddm);
  EXPECT_EQ(c.elements, ElementPair::Mini);
  EXPECT_DOUBLE_EQ(c.robin.delta_S, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.robin.delta_D, 2.0);
  ASSERT_EQ(c.coarse_sizes.size(), 2u);
  EXPECT_NEAR(c.fine_sizes[0], 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(c.fine_sizes[1], 1.0 / 18.0, 1e-15);
  EXPECT_EQ(c.tol, 1e-8);
  EXPECT_EQ(c.max_iter, 50);
}

TEST(Config, DefaultsToPowerRule) {
  const auto c = parse_config({"--coarse", "1/4,1/9,1/16"});
  EXPECT_EQ(c.algorithm, Algorithm::Tgddm2);
  EXPECT_EQ(c.fine_rule, FineRule::Pow15);
  EXPECT_NEAR(c.fine_sizes[0], 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(c.fine_sizes[1], 1.0 / 27.0, 1e-15);
  EXPECT_NEAR(c.fine_sizes[2], 1.0 / 64.0, 1e-15);
}

TEST(Config, ExplicitFineList) {
  const auto c = parse_config({"--coarse", "1/4,1/8", "--fine", "1/16,1/64"});
  EXPECT_EQ(c.fine_rule, FineRule::Explicit);
  EXPECT_NEAR(c.fine_sizes[1], 1.0 / 64.0, 1e-15);
}

TEST(Config, ConfigFileWithCommandLineOverride) {
  const fs::path dir = scratch_dir("cfg");
  fs::create_directories(dir);
  const fs::path file = dir / "run.cfg";
  std::ofstream(file) << "algorithm = tgddm1\ncoarse = 1/4,1/9\ndeltaS = 0.5\n";
  const auto c = parse_config({"--config", file.string(), "--deltaS", "0.25"});
  EXPECT_EQ(c.algorithm, Algorithm::Tgddm1);
  EXPECT_EQ(c.coarse_sizes.size(), 2u);
  EXPECT_DOUBLE_EQ(c.robin.delta_S, 0.25);
}

TEST(Config, Errors) {
  EXPECT_THROW((void)parse_config({}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--bogus", "1"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--fine", "1/16", "--fine-rule", "half"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--fine-rule", "explicit"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/9,1/4"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "2"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--fine", "1/2"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--deltaS", "0"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--z", "1"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--algorithm", "gmres"}), ConfigError);
  EXPECT_THROW((void)parse_config({"--coarse", "1/4", "--tol", "-1"}), ConfigError);

  const fs::path dir = scratch_dir("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "coarse = 1/4\nbogus = 1\n";
  EXPECT_THROW((void)parse_config({"--config", (dir / "bad.cfg").string()}), ConfigError);
}

TEST(Config, UsageMentionsEveryFlag) {
  const std::string u = usage();
  for (const char* flag : {"--algorithm", "--elements", "--deltaS", "--deltaD", "--coarse", "--fine-rule", "--fine",
                           "--tol", "--max-iter", "--output", "--config"}) {
    EXPECT_NE(u.find(flag), std::string::npos) << flag;
  }
}

class SmallRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { record_ = new RunRecord(run_experiment(small_config())); }
  static void TearDownTestSuite() {
    delete record_;
    record_ = nullptr;
  }
  static RunRecord* record_;
};

RunRecord* SmallRun::record_ = nullptr;

TEST_F(SmallRun, SucceedsWithOneRowPerCoarseSize) {
  EXPECT_TRUE(record_->success());
  EXPECT_EQ(exit_code(*record_), 0);
  ASSERT_EQ(record_->table.rows.size(), 3u);
  for (const auto& row : record_->table.rows) {
    EXPECT_GT(row.N, 0);
    EXPECT_GT(row.err_u_h1, 0.0);
    EXPECT_GE(row.t_coarse, 0.0);
  }
}

TEST_F(SmallRun, CsvLayout) {
  std::ostringstream out;
  write_csv(*record_, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 1u + 3u + 3u);
  EXPECT_EQ(lines[0], "algorithm,elements,deltaS,deltaD,H,h,N,err_u_h1,err_p_l2,err_phi_h1,t_coarse_s,t_fine_s");
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 11);
    EXPECT_EQ(lines[i].rfind("tgddm2,p2p1p2,", 0), 0u);
  }
  EXPECT_EQ(lines[4].rfind("# rate_err_u_h1=", 0), 0u);
  EXPECT_EQ(lines[5].rfind("# rate_err_p_l2=", 0), 0u);
  EXPECT_EQ(lines[6].rfind("# rate_err_phi_h1=", 0), 0u);
}

TEST_F(SmallRun, RatesEqualLeastSquaresFit) {
  const auto rates = table_rates(record_->table);
  ASSERT_EQ(rates.size(), 3u);
  for (const char* col : {"err_u_h1", "err_p_l2", "err_phi_h1"}) {
    EXPECT_DOUBLE_EQ(rates.at(col), fit_rate(record_->table, col));
  }
}

TEST_F(SmallRun, CsvRoundTrip) {
  std::stringstream buf;
  write_csv(*record_, buf);
  const CsvRecord back = read_csv(buf);
  EXPECT_EQ(back.algorithm, "tgddm2");
  EXPECT_EQ(back.elements, "p2p1p2");
  EXPECT_EQ(back.delta_S, 1.0);
  ASSERT_EQ(back.table.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = record_->table.rows[i];
    const auto& b = back.table.rows[i];
    EXPECT_NEAR(b.h, a.h, 1e-8 * a.h);  // nine significant digits
    EXPECT_EQ(b.N, a.N);
    EXPECT_NEAR(b.err_u_h1, a.err_u_h1, 1e-8 * a.err_u_h1);
    EXPECT_NEAR(b.err_phi_h1, a.err_phi_h1, 1e-8 * a.err_phi_h1);
  }
  for (const auto& [k, v] : table_rates(record_->table)) EXPECT_NEAR(back.rates.at(k), v, 1e-8);

  // Writing the parsed table again reproduces the data lines byte for byte.
  RunRecord again = *record_;
  again.table = back.table;
  std::ostringstream first;
  std::ostringstream second;
  write_csv(*record_, first);
  write_csv(again, second);
  const auto a = lines_of(first.str());
  const auto b = lines_of(second.str());
  for (std::size_t i = 0; i <= 3; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST_F(SmallRun, RepeatRunsDifferOnlyInTimings) {
  ExperimentConfig cfg = small_config();
  cfg.parallel_rows = true;
  const RunRecord again = run_experiment(cfg);
  ASSERT_EQ(again.table.rows.size(), record_->table.rows.size());
  std::ostringstream first;
  std::ostringstream second;
  write_csv(*record_, first);
  write_csv(again, second);
  const auto la = lines_of(first.str());
  const auto lb = lines_of(second.str());
  ASSERT_EQ(la.size(), lb.size());
  const auto without_times = [](const std::string& line) {
    auto cut = line.rfind(',');
    cut = line.rfind(',', cut - 1);
    return line.substr(0, cut);
  };
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (i >= 1 && i <= 3) {
      EXPECT_EQ(without_times(la[i]), without_times(lb[i]));
    } else {
      EXPECT_EQ(la[i], lb[i]);
    }
  }
  for (std::size_t i = 0; i < again.table.rows.size(); ++i) {
    const auto& a = record_->table.rows[i];
    const auto& b = again.table.rows[i];
    EXPECT_EQ(a.H, b.H);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.N, b.N);
    EXPECT_EQ(a.err_u_h1, b.err_u_h1);
    EXPECT_EQ(a.err_p_l2, b.err_p_l2);
    EXPECT_EQ(a.err_phi_h1, b.err_phi_h1);
  }
}

TEST(Experiment, CsvFileCreatesParentDirectories) {
  const fs::path dir = scratch_dir("csv");
  auto cfg = parse_config({"--coarse", "1/2"});
  const RunRecord rec = run_experiment(cfg);
  const fs::path file = dir / "nested" / "out.csv";
  write_csv(rec, file);
  const CsvRecord back = read_csv(file);
  EXPECT_EQ(back.table.rows.size(), 1u);
  EXPECT_TRUE(back.rates.empty());
}

TEST(Experiment, NonConvergedRowGivesExitTwo) {
  const RunRecord rec = run_experiment(parse_config({"--algorithm", "ddm", "--coarse", "1/2", "--max-iter", "2"}));
  ASSERT_EQ(rec.outcomes.size(), 1u);
  EXPECT_FALSE(rec.outcomes[0].ok);
  EXPECT_FALSE(rec.outcomes[0].message.empty());
  EXPECT_FALSE(rec.success());
  EXPECT_EQ(exit_code(rec), 2);
}

TEST(Experiment, RatesNeedThreePositiveRows) {
  ConvergenceTable t;
  t.rows.push_back({0.5, 0.25, 1, 0.1, 0.1, 0.1, 0, 0});
  t.rows.push_back({0.25, 0.125, 1, 0.05, 0.05, 0.05, 0, 0});
  EXPECT_TRUE(table_rates(t).empty());
  t.rows.push_back({0.125, 0.0625, 1, std::nan(""), 0.01, 0.01, 0, 0});
  const auto rates = table_rates(t);
  EXPECT_EQ(rates.count("err_u_h1"), 0u);
  EXPECT_EQ(rates.size(), 2u);
}

TEST(Experiment, MeshDumpFiles) {
  const fs::path dir = scratch_dir("mesh");
  auto cfg = parse_config({"--coarse", "1/2", "--fine", "1/3", "--mesh-dump", dir.string()});
  const RunRecord rec = run_experiment(cfg);
  ASSERT_TRUE(rec.success());
  for (const char* name : {"row0_coarse_stokes.mesh", "row0_coarse_darcy.mesh", "row0_fine_stokes.mesh",
                           "row0_fine_darcy.mesh"}) {
    ASSERT_TRUE(fs::exists(dir / name)) << name;
  }
  std::ifstream in(dir / "row0_fine_darcy.mesh");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# region darcy");
  int v = 0;
  int c = 0;
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    c += line.rfind("c ", 0) == 0;
  }
  const auto meshes = build_coupled_meshes(1.0 / 3.0);
  EXPECT_EQ(v, static_cast<int>(meshes.darcy->vertex_count()));
  EXPECT_EQ(c, static_cast<int>(meshes.darcy->cell_count()));
}

}  // namespace
}  // namespace sdtg
