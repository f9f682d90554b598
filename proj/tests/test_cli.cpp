#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rtdqs/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(const std::string& args) {
  const std::string cmd = std::string(RTDQS_SIM_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("rtdqs_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto s = rtdqs::baseline_scenario();
    s.sim_duration = 40.0;
    for (auto& t : s.traffic) t.stop_time = 40.0;
    std::ofstream(dir / "small.json") << rtdqs::scenario_to_json(s).dump(2);
    std::ofstream(dir / "bad.json") << R"({"sim_duration": -5, "nodes": []})";
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const char* name) const { return (dir / name).string(); }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, ValidateShippedBaseline) {
  EXPECT_EQ(exit_code("validate --scenario " RTDQS_SCENARIO_DIR "/baseline.json"), 0);
}

TEST_F(Cli, ValidationFailuresExitOne) {
  EXPECT_EQ(exit_code("validate --scenario " + path("bad.json")), 1);
  EXPECT_EQ(exit_code("validate --scenario " + path("broken.json")), 1);
  EXPECT_EQ(exit_code("validate --scenario " + path("missing.json")), 1);
  EXPECT_EQ(exit_code("run --scenario " + path("small.json") + " --protocol flooding"), 1);
  EXPECT_EQ(exit_code("sweep --scenario " + path("small.json") + " --seeds 9..1"), 1);
  EXPECT_EQ(exit_code("frobnicate"), 1);
  EXPECT_EQ(exit_code(""), 1);
}

TEST_F(Cli, RuntimeFailureExitsTwo) {
  EXPECT_EQ(exit_code("run --scenario " + path("small.json") + " --out " + path("no/such/dir/out.csv")), 2);
}

TEST_F(Cli, RunWritesRowProvidersAndTrace) {
  ASSERT_EQ(exit_code("run --scenario " + path("small.json") + " --seed 2 --out " + path("run.csv") + " --trace " +
                      path("run.trace")),
            0);
  const auto csv = slurp(dir / "run.csv");
  EXPECT_EQ(csv.rfind(std::string(rtdqs::kCsvHeader) + "\nrtdqs,15,40,2,", 0), 0u) << csv;
  EXPECT_TRUE(fs::exists(dir / "run_providers.csv"));
  EXPECT_GT(fs::file_size(dir / "run.trace"), 0u);

  ASSERT_EQ(exit_code("run --scenario " + path("small.json") + " --seed 2 --out " + path("again.csv")), 0);
  EXPECT_EQ(slurp(dir / "again.csv"), csv);
}

TEST_F(Cli, SweepMatchesLibrary) {
  ASSERT_EQ(exit_code("sweep --scenario " + path("small.json") +
                      " --densities 5,40 --deadlines 15,25 --protocols rtdqs,closest --seeds 1..2 --threads 1 --out " +
                      path("sweep.csv")),
            0);
  const auto base = rtdqs::load_scenario(path("small.json"));
  const auto result = rtdqs::run_sweep(base, {rtdqs::Protocol::Rtdqs, rtdqs::Protocol::ClosestRtd},
                                       rtdqs::parse_deadlines("15,25"), {5, 40}, {1, 2}, 1);
  std::ostringstream expected;
  rtdqs::write_sweep_csv(expected, result);
  EXPECT_EQ(slurp(dir / "sweep.csv"), expected.str());
  EXPECT_TRUE(fs::exists(dir / "sweep_providers.csv"));
}
