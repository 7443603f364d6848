// Runs the built solidhull binary and checks output and exit codes.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "solid/io.hpp"

namespace fs = std::filesystem;
using solid::io::Json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(SOLIDHULL_BIN) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "solidhull_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

double num(const Json& j) { return solid::io::json_real(j); }

}  // namespace

TEST(Cli, RadiiStandardWeight) {
  const Result r = run("radii --weight std:alpha=1 --m 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(num(Json::parse(r.out)["points"][0]["r"]), 0.75, 1e-12);
}

TEST(Cli, RadiiPlaneWeight) {
  const Result r = run("radii --weight expplane:p=2 --m 8");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(num(Json::parse(r.out)["points"][0]["r"]), 2.0, 1e-11);
}

TEST(Cli, RadiiRangeAndCsv) {
  const Result r = run("radii --weight expdisc:a=1,b=1 --m 1..4 --out csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("m,r,log_r,log_max\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, ClosedPartitionFirstExample) {
  const Result r = run("partition --weight expdisc:a=1,b=1,w=one --n 2..5 --mode closed");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  const double want[] = {12, 72, 240, 600};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(num(j[i]["m_n"]), want[i], 1e-9);
}

TEST(Cli, ClosedPartitionSecondExample) {
  const Result r = run("partition --weight expdisc:a=1,b=2,w=oneminusr --n 2..2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(num(Json::parse(r.out)[0]["m_n"]), 16.4558441, 1e-7);
}

TEST(Cli, GreedyPartitionPassesConditionB) {
  const Result r = run("partition --weight expplane:p=1 --n 1..20 --mode greedy");
  ASSERT_EQ(r.code, 0);
  const fs::path f = temp_file("greedy.json", r.out);
  const solid::BlockPartition p = solid::io::read_partition(f.string());
  const solid::ConditionBReport rep = solid::condition_b_check(solid::io::parse_weight("expplane:p=1"), p);
  EXPECT_TRUE(rep.holds());
  EXPECT_GE(rep.inferred_b, 2.2 * (1 - 1e-6));
}

TEST(Cli, NormEmptyCoefficientsGivesSentinel) {
  const fs::path f = temp_file("empty.txt", "");
  const Result r = run("norm --kind hull --weight expdisc:a=1,b=1 --coeffs " + f.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["log_sup"], "-inf");
}

TEST(Cli, NormKindsOnMonomial) {
  const fs::path f = temp_file("mono.txt", "100\t1\n");
  for (const char* kind : {"hull", "core", "majorant"}) {
    const Result r = run(std::string("norm --kind ") + kind + " --weight expdisc:a=1,b=1 --coeffs " + f.string());
    EXPECT_EQ(r.code, 0) << kind;
  }
  const Result std_hull = run("norm --kind std-hull --weight std:alpha=1 --coeffs " + f.string());
  ASSERT_EQ(std_hull.code, 0);
  EXPECT_NEAR(num(Json::parse(std_hull.out)["log_sup"]), -std::log(101.0), 1e-11);
  const Result sq = run("norm --kind squared-hull --a 1 --b 1 --coeffs " + f.string());
  EXPECT_EQ(sq.code, 0);
  const Result maj = run("norm --kind majorant --weight expdisc:a=1,b=1 --coeffs " + f.string());
  const double want = solid::log_max_value(solid::io::parse_weight("expdisc:a=1,b=1"), 100);
  EXPECT_NEAR(num(Json::parse(maj.out)["log_norm"]), want, 1e-10 * std::abs(want));
}

TEST(Cli, NormWithPartitionFile) {
  const Result part = run("partition --weight expdisc:a=1,b=1 --n 2..6 --out csv");
  ASSERT_EQ(part.code, 0);
  const fs::path pf = temp_file("part.csv", part.out);
  const fs::path cf = temp_file("c.txt", "100\t1\n300\t2\n");
  const Result with = run("norm --kind core --weight expdisc:a=1,b=1 --partition " + pf.string() + " --coeffs " + cf.string());
  const Result without = run("norm --kind core --weight expdisc:a=1,b=1 --coeffs " + cf.string());
  ASSERT_EQ(with.code, 0);
  EXPECT_NEAR(num(Json::parse(with.out)["log_sup"]), num(Json::parse(without.out)["log_sup"]), 1e-10);
}

TEST(Cli, DominatedPairMonotone) {
  const fs::path a = temp_file("a.txt", "20\t3\n100\t2\n400\t5\n");
  const fs::path b = temp_file("b.txt", "20\t1\n400\t4\n");
  for (const char* kind : {"hull", "core"}) {
    const Result ra = run(std::string("norm --kind ") + kind + " --weight expdisc:a=1,b=1 --coeffs " + a.string());
    const Result rb = run(std::string("norm --kind ") + kind + " --weight expdisc:a=1,b=1 --coeffs " + b.string());
    EXPECT_LE(num(Json::parse(rb.out)["log_sup"]), num(Json::parse(ra.out)["log_sup"]));
  }
}

TEST(Cli, OutputIsByteIdentical) {
  const std::string args = "verify lemma14 --trials 20 --seed 3";
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, SquaredCommand) {
  const fs::path f = temp_file("sq.txt", "40\t1\n41\t1\n");
  const Result r = run("squared --a 1 --b 1 --coeffs " + f.string() + " --norm core");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["attained_n"], 2);
}

TEST(Cli, TailsCommands) {
  const Result radius = run("tails radius --weight expdisc:a=1,b=1 --m 0 --eps 1e-3");
  ASSERT_EQ(radius.code, 0);
  EXPECT_NEAR(num(Json::parse(radius.out)["r0"]), 1.0 - 1.0 / (1.0 - std::log(1e-3)), 1e-11);
  const Result degree = run("tails degree --weight expdisc:a=1,b=1 --r1 0.5 --eps 1e-6");
  ASSERT_EQ(degree.code, 0);
  EXPECT_EQ(Json::parse(degree.out)["n"], 45);
  const fs::path f = temp_file("blocks.txt", "1\t1\n10\t1\n100\t1\n1000\t1\n");
  const Result select = run("tails select --weight expdisc:a=1,b=1 --coeffs " + f.string() + " --cuts 0,5,50,500,5000");
  ASSERT_EQ(select.code, 0);
  EXPECT_TRUE(Json::parse(select.out)["factor_two_ok"].get<bool>());
  const Result probe = run("tails probe --weight expdisc:a=1,b=1 --coeffs " + f.string());
  EXPECT_EQ(probe.code, 0);
  const Result logsq = run("tails logsq --coeffs " + f.string());
  ASSERT_EQ(logsq.code, 0);
  EXPECT_TRUE(Json::parse(logsq.out)["lower_ok"].get<bool>());
}

TEST(Cli, VerifySuites) {
  EXPECT_EQ(run("verify examples15").code, 0);
  EXPECT_EQ(run("verify condb --weight expdisc:a=1,b=1 --n 10..200").code, 0);
  EXPECT_EQ(run("verify logsq --trials 100").code, 0);
  const Json j = Json::parse(run("verify examples15").out);
  EXPECT_EQ(j["summary"]["pass"], 4);
  EXPECT_EQ(j["summary"]["fail"], 0);
}

TEST(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("radii --weight expdisc:a=1,b=x --m 3").code, 2);
  EXPECT_EQ(run("radii --weight nosuch --m 3").code, 2);
  EXPECT_EQ(run("verify nosuch").code, 2);
  EXPECT_EQ(run("norm --kind hull --weight expdisc:a=1,b=1 --coeffs /nonexistent/file").code, 2);
  const fs::path f = temp_file("low.txt", "3\t1\n");
  EXPECT_EQ(run("norm --kind hull --weight expdisc:a=1,b=1 --coeffs " + f.string()).code, 2);
  EXPECT_EQ(run("tails degree --weight expdisc:a=1,b=1 --r1 1.5").code, 2);
}

TEST(Cli, NumericFailureExitsThree) {
  // Quotients grow only polynomially for standard weights, so b = 1e300 is out of reach.
  EXPECT_EQ(run("partition --weight std:alpha=1 --n 1..3 --mode greedy --target 1e300").code, 3);
}
