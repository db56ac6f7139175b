#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(HOUGH_CLI) + ' ' + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hough_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndVersion) {
  EXPECT_EQ(run("--help").code, 0);
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}

TEST_F(Cli, BoundsTacnode) {
  const auto r = run("bounds --family quartic_tacnode");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("nu_opt: 13\n"), std::string::npos);
  EXPECT_NE(r.out.find("base_points: 4\n"), std::string::npos);
}

TEST_F(Cli, BoundsLamet) {
  const auto r = run("bounds --family lamet --m 4");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("nu_opt: 17\n"), std::string::npos);
  EXPECT_NE(r.out.find("s: 3\n"), std::string::npos);
  EXPECT_NE(r.out.find("nu_best_prime: 2\n"), std::string::npos);
}

TEST_F(Cli, BoundsAndMatrixForConicPoints) {
  const auto pts = write("ex0.csv", "x,y\n1,-2\n-1,0\n-2,-2\n");
  const auto b = run("bounds --family conic_ex0 --points " + pts.string());
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_NE(b.out.find("nu_best: 2\n"), std::string::npos);
  EXPECT_NE(b.out.find("generators: 0 1\n"), std::string::npos);

  const auto m = run("ht-matrix --family conic_ex0 --points " + pts.string() + " --out " +
                     (dir_ / "m.csv").string());
  ASSERT_EQ(m.code, 0) << m.out;
  EXPECT_EQ(slurp(dir_ / "m.csv"), "L0^2,B*L0,A^2\n1,-2,1\n-1,0,1\n-2,-2,4\n");
}

TEST_F(Cli, ArgumentErrorsExitTwo) {
  EXPECT_EQ(run("bounds --family nope").code, 2);
  EXPECT_EQ(run("bounds").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("experiment --family descartes_folium --runs 0 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("experiment --family descartes_folium --noise 100 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("recognize --family descartes_folium --points /nonexistent.csv").code, 2);
}

TEST_F(Cli, NoSignalExitsThree) {
  const auto pts = write("origin.csv", "x,y\n0,0\n");
  const auto r = run("recognize --family descartes_folium --points " + pts.string());
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST_F(Cli, SamplingErrorExitsFour) {
  const auto r = run("sample --family elliptic2 --true-params=-4,200 --n1 5 --out " +
                     (dir_ / "p.csv").string());
  EXPECT_EQ(r.code, 4) << r.out;
}

TEST_F(Cli, SampleThenRecognize) {
  const auto pts = dir_ / "p.csv";
  ASSERT_EQ(run("sample --family descartes_folium --true-params 3,1 --n1 9 --noise 90 --seed 3 --out " + pts.string()).code, 0);
  const auto text = slurp(pts);
  EXPECT_EQ(text.substr(0, 10), "x,y,label\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 91);

  const auto r = run("recognize --family descartes_folium --points " + pts.string() +
                     " --true-params 3,1 --out " + (dir_ / "rec").string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto outcome = slurp(dir_ / "rec" / "outcome.csv");
  EXPECT_EQ(outcome.substr(0, outcome.find('\n')), "a,b,i,j,votes,exact,distance,degenerate_skipped");
  EXPECT_NE(outcome.find(",1,0,"), std::string::npos);  // exact, distance 0
}

TEST_F(Cli, ExperimentIsReproducible) {
  const std::string args = "experiment --family quartic_triple --kind background_noise --noise 95 "
                           "--runs 5 --seed 4 --out ";
  ASSERT_EQ(run(args + (dir_ / "a").string() + " --threads 1").code, 0);
  ASSERT_EQ(run(args + (dir_ / "b").string() + " --threads 3").code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "report.csv"), slurp(dir_ / "b" / "report.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "runs.csv"), slurp(dir_ / "b" / "runs.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "points_0.csv"));
}

TEST_F(Cli, ExperimentConfigFileAndOverride) {
  const auto cfg = write("c.json", R"({"family": "elliptic2", "kind": "noise_free", "runs": 3})");
  ASSERT_EQ(run("experiment --config " + cfg.string() + " --runs 2 --out " + (dir_ / "r").string()).code, 0);
  const auto report = slurp(dir_ / "r" / "report.csv");
  EXPECT_NE(report.find("0,noise_free,elliptic2,noise_free,0,0,9,0,9,2,0,2,100,"), std::string::npos)
      << report;
  const auto bad = write("bad.json", R"({"family": "elliptic2", "colour": 1})");
  EXPECT_EQ(run("experiment --config " + bad.string() + " --out " + (dir_ / "x").string()).code, 2);
}

TEST_F(Cli, RenderIsDeterministic) {
  const auto pts = dir_ / "p.csv";
  ASSERT_EQ(run("sample --family quartic_tacnode --true-params 1,8 --n1 13 --noise 80 --seed 2 --out " + pts.string()).code, 0);
  const std::string args = "render --family quartic_tacnode --points " + pts.string() +
                           " --params 1,8 --truth 1,8 --out ";
  ASSERT_EQ(run(args + (dir_ / "a.svg").string()).code, 0);
  ASSERT_EQ(run(args + (dir_ / "b.svg").string()).code, 0);
  const auto a = slurp(dir_ / "a.svg");
  EXPECT_EQ(a, slurp(dir_ / "b.svg"));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(run("render --family quartic_tacnode --out " + (dir_ / "c.svg").string()).code, 2);
}

TEST_F(Cli, ExperimentSvgOverlays) {
  ASSERT_EQ(run("experiment --family descartes_folium --kind background_noise --noise 95 --runs 4 "
                "--svg --out " + (dir_ / "s").string()).code,
            0);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "overlay_0.svg"));
}
