#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "bcn/cli.hpp"
#include "bcn/io.hpp"

namespace bcn {
namespace {

namespace fs = std::filesystem;

const fs::path kGolden = BCN_GOLDEN_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bcnkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bcn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    ASSERT_EQ(run({"gen", "avalanche", "--out", dir_.string()}).code, 0);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const char* name) const { return (dir_ / name).string(); }
  std::string cascade() const { return path("system.cascade"); }
  void write(const char* name, const std::string& text) const { write_file(dir_ / name, text); }

  fs::path dir_;
};

TEST_F(Cli, GenMatchesGolden) {
  for (const char* f : {"context.bcn", "functional.bcn", "system.cascade"})
    EXPECT_EQ(read_file(dir_ / f), read_file(kGolden / f)) << f;
}

TEST_F(Cli, GenWithParameters) {
  const auto r = run({"gen", "avalanche", "--ctx-threshold", "2", "--acc-threshold", "3",
                      "--reset-policy", "decrement", "--out", path("alt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Bcn c = load_model(dir_ / "alt" / "context.bcn");
  EXPECT_EQ(c.n_states, 3u);
  EXPECT_EQ(c.L(2), LogicalMatrix(3, {1, 1, 2}));
  EXPECT_EQ(load_model(dir_ / "alt" / "functional.bcn").n_states, 4u);
  EXPECT_EQ(run({"gen", "avalanche", "--reset-policy", "sometimes", "--out", path("x")}).code, 2);
  EXPECT_EQ(run({"gen", "avalanche", "--ctx-threshold", "0", "--out", path("x")}).code, 2);
}

TEST_F(Cli, ReportMatchesGolden) {
  const auto text = run({"report", "--cascade", cascade()});
  ASSERT_EQ(text.code, 0) << text.err;
  EXPECT_EQ(text.out, read_file(kGolden / "report.txt"));
  const auto json = run({"report", "--cascade", cascade(), "--json"});
  ASSERT_EQ(json.code, 0) << json.err;
  EXPECT_EQ(json.out, read_file(kGolden / "report.json"));
  EXPECT_TRUE(json.err.empty());
  EXPECT_EQ(run({"report", "--cascade", cascade(), "--json"}).out, json.out);
}

TEST_F(Cli, Reconstructibility) {
  auto r = run({"reconstructibility", "--cascade", cascade()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "reconstructible, horizon ≤ 4\n");
  r = run({"reconstructibility", "--model", path("functional.bcn")});
  EXPECT_EQ(r.out, "reconstructible, horizon ≤ 2\n");
  r = run({"reconstructibility", "--model", path("context.bcn"), "--max-horizon", "3"});
  EXPECT_EQ(r.code, 3);
  r = run({"reconstructibility"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, Equilibria) {
  auto r = run({"equilibria", "--model", path("context.bcn"), "--all"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "input δ^1_4: δ^5_5 (globally attractive)\n"
            "input δ^2_4: δ^1_5 (globally attractive)\n"
            "input δ^3_4: δ^1_5 (globally attractive)\n"
            "input δ^4_4: δ^1_5 (globally attractive)\n");
  r = run({"equilibria", "--model", path("functional.bcn"), "--input", "3"});
  EXPECT_EQ(r.out, "input δ^3_16: δ^1_3 (globally attractive)\n");
  EXPECT_EQ(run({"equilibria", "--model", path("context.bcn")}).code, 2);
  EXPECT_EQ(run({"equilibria", "--model", path("context.bcn"), "--input", "9"}).code, 2);
}

TEST_F(Cli, Attractors) {
  const auto r = run({"attractors", "--model", path("context.bcn"), "--input", "1"});
  EXPECT_EQ(r.out, "fixed point (5) basin 5\nno limit cycles\n");
}

TEST_F(Cli, Observability) {
  auto r = run({"observability", "--model", path("context.bcn")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("not observable", 0), 0u) << r.out;
  r = run({"observability", "--model", path("context.bcn"), "--weak", "--max-horizon", "6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("weakly observable", 0), 0u) << r.out;
  r = run({"observability", "--model", path("context.bcn"), "--weak", "--max-horizon", "2"});
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, SimulateAndFaults) {
  std::string csv = "t,u,v1,v2,v3\n";
  for (int t = 0; t < 8; ++t) csv += std::to_string(t) + ",1,1,1,1\n";
  write("in.csv", csv);

  auto r = run({"simulate", "--cascade", cascade(), "--trace", path("in.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,u,v1,v2,v3,c,a,v4,m");
  EXPECT_NE(r.out.find("4,1,1,1,1,5,3,1,1\n"), std::string::npos) << r.out;
  write("nominal.csv", r.out);
  EXPECT_EQ(run({"fault", "detect", "--cascade", cascade(), "--trace", path("nominal.csv")}).code,
            0);

  r = run({"fault", "inject", "--cascade", cascade(), "--trace", path("in.csv"), "--component",
           "context", "--onset", "2", "--a0", "3", "--out", path("faulty.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"fault", "detect", "--cascade", cascade(), "--trace", path("faulty.csv"), "--c0", "1",
           "--a0", "3"});
  EXPECT_EQ(r.code, 4);
  // Frozen at 3 from t=2; the healthy counter would reach 5 at t=4. With a
  // at 3 a functional freeze would still alarm, so only the context fits.
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "fault detected at t=4 (predicted m=1, observed m=2); component: context");

  r = run({"fault", "detect", "--cascade", cascade(), "--trace", path("in.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("observed"), std::string::npos);
  EXPECT_EQ(run({"fault", "inject", "--cascade", cascade(), "--trace", path("in.csv"),
                 "--component", "sensor", "--onset", "0", "--out", path("x.csv")})
                .code,
            2);
}

TEST_F(Cli, InputErrorsGoToStderr) {
  write("bad.bcn", "BCN\nN 2\nM 1\nP 1\nL 1: 1\nH 1: 1 1\nEND\n");
  const auto r = run({"observability", "--model", path("bad.bcn")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;
  EXPECT_EQ(run({"report", "--cascade", path("missing.cascade")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace bcn
