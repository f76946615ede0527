#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(EPLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("eplab_cli_" + std::string(
                                                          ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    std::ofstream(dir_ / name) << content;
    return dir_ / name;
  }

  std::string out_dir(const std::string& sub) { return "--out-dir " + (dir_ / sub).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ClassifyExamples) {
  auto r = run_cli("classify --d -3 --rho 1 --n 2");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "SupCriticalOmega1");
  EXPECT_DOUBLE_EQ(j["I"].get<double>(), 9.0);
  EXPECT_TRUE(j["chae_tadmor_member"].get<bool>());
  EXPECT_NEAR(j["t_upper"].get<double>(), 2.0 / 3.0, 1e-15);

  r = run_cli("classify --d 0 --rho 1 --n 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["verdict"], "Boundary");

  const auto unit = run_cli("classify --d 0 --rho 2 --n 2");
  const auto phys = run_cli("classify --d 0 --rho 2 --n 2 --c 1 --k -1");
  ASSERT_EQ(phys.code, 0);
  EXPECT_EQ(unit.out, phys.out);
  EXPECT_EQ(json::parse(phys.out)["verdict"], "SupCriticalOmega2");
}

TEST_F(CliTest, ClassifyInvalidInput) {
  EXPECT_EQ(run_cli("classify --d 0 --rho 0 --n 2").code, 2);
  EXPECT_EQ(run_cli("classify --d 0 --rho 1 --n 2 --k 0.5").code, 2);
  EXPECT_EQ(run_cli("classify --d 0 --rho 1 --n 0").code, 2);
  EXPECT_EQ(run_cli("classify --d abc --rho 1 --n 2").code, 2);
  EXPECT_EQ(run_cli("classify --rho 1 --n 2").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
}

TEST_F(CliTest, PortraitBundle) {
  const auto r = run_cli(out_dir("p") + " portrait --n 2 --resolution 30");
  ASSERT_EQ(r.code, 0);
  const auto manifest = json::parse(slurp(dir_ / "p" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "portrait");
  EXPECT_EQ(manifest["config_digest"].get<std::string>().size(), 64u);
  for (const auto& f : manifest["outputs"]) EXPECT_TRUE(fs::exists(dir_ / "p" / f.get<std::string>())) << f;
  const std::string points = slurp(dir_ / "p" / "points.csv");
  EXPECT_NE(points.find("Saddle"), std::string::npos);
  EXPECT_NE(points.find("NodalSource"), std::string::npos);
  EXPECT_NE(points.find("NodalSink"), std::string::npos);
}

TEST_F(CliTest, PortraitSeedsFile) {
  const auto seeds = write("seeds.csv", "d,rho\n-1,1\n0.5,0.5\n");
  ASSERT_EQ(run_cli(out_dir("p") + " portrait --resolution 10 --seeds-file " + seeds.string()).code, 0);
  const std::string traj = slurp(dir_ / "p" / "trajectories.csv");
  EXPECT_NE(traj.find("\n1,"), std::string::npos);
  EXPECT_EQ(traj.find("\n2,"), std::string::npos);
  const auto bad = write("bad.csv", "d,rho\n-1,0\n");
  EXPECT_EQ(run_cli(out_dir("q") + " portrait --seeds-file " + bad.string()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "q" / "manifest.json"));
}

TEST_F(CliTest, UnwritableDirectory) {
  const auto blocker = write("file", "x");
  EXPECT_EQ(run_cli("--out-dir " + (blocker / "sub").string() + " portrait --resolution 10").code, 3);
  EXPECT_EQ(run_cli("--out-dir " + (blocker / "sub").string() + " integrate --d0 -1 --rho0 1 --n 2").code, 3);
}

TEST_F(CliTest, OutDirFromEnvironment) {
  const std::string env_dir = (dir_ / "env").string();
  const std::string cmd = "EPLAB_OUT_DIR=" + env_dir + " " + EPLAB_CLI_PATH + " integrate --d0 -1 --rho0 1 --n 2";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(fs::path(env_dir) / "summary.json"));
}

TEST_F(CliTest, IntegrateSummary) {
  ASSERT_EQ(run_cli(out_dir("i") + " integrate --d0 -3 --rho0 1 --n 2").code, 0);
  const auto s = json::parse(slurp(dir_ / "i" / "summary.json"));
  EXPECT_EQ(s["event"], "BlowupDetected");
  EXPECT_LT(s["t_detect"].get<double>(), 2.0 / 3.0);
  EXPECT_NEAR(s["bounds"][0]["t_upper"].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_LE(s["invariant_drift"].get<double>(), 1e-6);
  EXPECT_EQ(slurp(dir_ / "i" / "trajectory.csv").substr(0, 10), "t,d,rho,I\n");
  EXPECT_EQ(run_cli(out_dir("j") + " integrate --d0 -3 --rho0 0 --n 2").code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "j"));
}

TEST_F(CliTest, SimulateUniformAndRejections) {
  const auto cfg = write("u.json", R"({"cells": 128, "max_time": 1.0, "initial": {"kind": "uniform"}})");
  ASSERT_EQ(run_cli(out_dir("s") + " simulate " + cfg.string()).code, 0);
  const auto s = json::parse(slurp(dir_ / "s" / "summary.json"));
  EXPECT_EQ(s["outcome"], "RanToMaxTime");
  EXPECT_TRUE(s["t_detect"].is_null());
  EXPECT_DOUBLE_EQ(s["final_time"].get<double>(), 1.0);

  std::string rho = "[1.5", u = "[0";
  for (int i = 1; i < 16; ++i) {
    rho += ",1";
    u += ",0";
  }
  const auto bad_mean =
      write("m.json", R"({"cells": 16, "initial": {"kind": "samples", "rho": )" + rho + "], \"u\": " + u + "]}}");
  EXPECT_EQ(run_cli(out_dir("m") + " simulate " + bad_mean.string()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "m"));
  EXPECT_EQ(run_cli(out_dir("m") + " simulate " + write("x.json", R"({"cells": "many"})").string()).code, 2);
  EXPECT_EQ(run_cli(out_dir("m") + " simulate " + write("y.json", R"({"scheme": "weno"})").string()).code, 2);
  EXPECT_EQ(run_cli(out_dir("m") + " simulate " + write("z.json", "{not json").string()).code, 2);
  EXPECT_EQ(run_cli(out_dir("m") + " simulate " + (dir_ / "missing.json").string()).code, 2);
}

TEST_F(CliTest, SimulateCosineBump) {
  const auto cfg = write("c.json", R"({"cells": 1024, "max_time": 4,
      "initial": {"kind": "density_cosine", "amplitude": 0.5}, "snapshot_times": [0.5]})");
  ASSERT_EQ(run_cli(out_dir("s") + " simulate " + cfg.string()).code, 0);
  const auto s = json::parse(slurp(dir_ / "s" / "summary.json"));
  EXPECT_EQ(s["outcome"], "BlowupDetected");
  EXPECT_LT(s["relative_gap"].get<double>(), 0.05);
  const auto manifest = json::parse(slurp(dir_ / "s" / "manifest.json"));
  int fields = 0;
  for (const auto& f : manifest["outputs"]) {
    EXPECT_TRUE(fs::exists(dir_ / "s" / f.get<std::string>()));
    fields += f.get<std::string>().rfind("fields_t", 0) == 0;
  }
  EXPECT_EQ(fields, 1);
  EXPECT_EQ(slurp(dir_ / "s" / "sim_history.csv").substr(0, 17), "t,max_rho,min_ux\n");
}

TEST_F(CliTest, SweepDeterministicAndCrossesThreshold) {
  const auto cfg = write("c.json", R"({"cells": 256, "max_time": 3})");
  const std::string args = " sweep --family velocity_sine --param-range 0.02:0.6 --steps 5 --config " + cfg.string();
  ASSERT_EQ(run_cli(out_dir("a") + " --threads 3" + args).code, 0);
  ASSERT_EQ(run_cli(out_dir("b") + " --threads 1" + args).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "sweep.csv"), slurp(dir_ / "b" / "sweep.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "manifest.json"), slurp(dir_ / "b" / "manifest.json"));
  const std::string csv = slurp(dir_ / "a" / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "param,predicted_verdict,observed_outcome,t_pred,t_detect");
  EXPECT_NE(csv.find("RanToMaxTime"), std::string::npos);
  EXPECT_NE(csv.find("BlowupDetected"), std::string::npos);
}

TEST_F(CliTest, SweepEdgeCases) {
  ASSERT_EQ(run_cli(out_dir("e") + " sweep --family uniform --param-range 0:1 --steps 0").code, 0);
  EXPECT_EQ(slurp(dir_ / "e" / "sweep.csv"), "param,predicted_verdict,observed_outcome,t_pred,t_detect\n");
  EXPECT_EQ(run_cli(out_dir("f") + " sweep --family nope --param-range 0:1").code, 2);
  EXPECT_EQ(run_cli(out_dir("f") + " sweep --family uniform --param-range 01").code, 2);
  EXPECT_EQ(run_cli(out_dir("f") + " sweep --family density_cosine --param-range 0.5:1.5 --steps 3").code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "f"));
}

}  // namespace
