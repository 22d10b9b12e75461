#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ordkit/braid.hpp"
#include "ordkit/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = ordkit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args, int expect_code = 0) {
  Outcome r = run(args);
  EXPECT_EQ(r.code, expect_code) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j.at("schema_version"), ordkit::cli::kSchemaVersion);
  return j;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ordkit_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, BraidSign) {
  json j = run_json({"braid", "sign", "--order", "dehornoy:b3", "--element", "s1^-1 s2^4"});
  EXPECT_EQ(j["sign"], "-");
  EXPECT_EQ(run({"braid", "sign", "--order", "dehornoy:b3", "--element", "s1^-1 s2^4", "--expect", "+"}).code, 1);
}

TEST(Cli, OrderCompare) {
  json j = run_json({"order", "compare", "--order", "dehornoy:b3", "--g", "s1", "--h", "s2"});
  EXPECT_EQ(j["comparison"], ">");
}

TEST(Cli, BraidEqual) {
  json j = run_json({"braid", "equal", "--group", "b3", "--a", "s1 s2 s1", "--b", "s2 s1 s2"});
  EXPECT_EQ(j["equal"], true);
  EXPECT_EQ(run({"braid", "equal", "--group", "b3", "--a", "s1", "--b", "s2", "--expect", "true"}).code, 1);
}

TEST(Cli, HolderCsv) {
  Outcome r = run({"--format", "csv", "holder", "--order", "zn:slope:1,sqrt2", "--f", "(1,0)", "--g", "(0,1)", "--pmax", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "p,q,ratio\n1,1,1\n2,2,1\n3,4,4/3\n");
  // --format also accepted after the subcommand
  Outcome late = run({"holder", "--order", "zn:slope:1,sqrt2", "--f", "(1,0)", "--g", "(0,1)", "--pmax", "3", "--format", "csv"});
  EXPECT_EQ(late.out, r.out);
}

TEST(Cli, ExtendCount) {
  json j = run_json({"space", "extend-count", "--group", "z2", "--radius", "1"});
  EXPECT_EQ(j["count"], 4);
  EXPECT_EQ(j["status"], "consistent");
  EXPECT_EQ(run({"space", "extend-count", "--group", "z2", "--radius", "1", "--expect", "5"}).code, 1);
  json bad = run_json({"space", "extend-count", "--group", "z1", "--radius", "2", "--fix", "(1):+", "--fix", "(2):-"});
  EXPECT_EQ(bad["status"], "inconsistent");
  EXPECT_FALSE(bad["certificates"].empty());
  EXPECT_EQ(run({"space", "extend-count", "--group", "z1", "--radius", "2", "--fix", "(1):+", "--fix", "(2):-", "--expect", "0"}).code, 0);
}

TEST(Cli, ProbeAndConverge) {
  json p = run_json({"space", "probe", "--order", "zn:slope:1,sqrt2", "--radius", "3"});
  EXPECT_EQ(p["result"], "realized");
  Outcome c = run({"--format", "csv", "space", "converge", "--order", "dehornoy:b3", "--target", "3"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.rfind("m,agreement_radius,conjugator,discriminator\n", 0), 0u);
  EXPECT_EQ(std::count(c.out.begin(), c.out.end(), '\n'), 4);
}

TEST(Cli, Soul) {
  json j = run_json({"space", "soul", "--strands", "3"});
  EXPECT_EQ(j["j"], 2);
  EXPECT_EQ(run({"space", "soul", "--strands", "3", "--expect", "1"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"braid", "sign", "--order", "dehornoy:b3"}).code, 2);
  EXPECT_EQ(run({"braid", "sign", "--order", "dehornoy:b3", "--element", "s3"}).code, 2);
  EXPECT_EQ(run({"order", "sign", "--order", "nope:b3", "--element", "s1"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "order", "sign", "--order", "dehornoy:b3", "--element", "s1"}).code, 2);
  Outcome r = run({"crossings"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, StepCapGivesResourceExit) {
  const auto old = ordkit::braid::default_step_cap();
  ::setenv("ORDKIT_STEP_CAP", "3", 1);
  Outcome r = run({"braid", "reduce", "--group", "b4", "--element", "s1 s2 s3 s2^-1 s1^-1 s3^-1 s2 s1 s3^-1 s2^-1 s1^-1"});
  ::unsetenv("ORDKIT_STEP_CAP");
  ordkit::braid::set_default_step_cap(old);
  EXPECT_EQ(r.code, 3);
  ::setenv("ORDKIT_THREADS", "zero", 1);
  EXPECT_EQ(run({"order", "sign", "--order", "dehornoy:b3", "--element", "s1"}).code, 2);
  ::unsetenv("ORDKIT_THREADS");
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> cmds[] = {
      {"space", "extend-count", "--group", "klein", "--radius", "3"},
      {"crossings", "--order", "dehornoy:b3", "--count", "120"},
      {"space", "converge", "--order", "dd:b3", "--reference", "dehornoy:b3", "--target", "2"},
  };
  for (const auto& c : cmds) {
    Outcome a = run(c), b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, ConfigDefaults) {
  const auto path = temp_file("cfg");
  {
    std::ofstream f(path);
    f << "# defaults\norder = dehornoy:b3\nformat = text\n";
  }
  Outcome r = run({"--config", path.string(), "order", "sign", "--element", "s2^-1 s1 s2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sign: +"), std::string::npos) << r.out;
  {
    std::ofstream f(path);
    f << "colour = blue\n";
  }
  EXPECT_EQ(run({"--config", path.string(), "order", "sign", "--order", "dehornoy:b3", "--element", "s1"}).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"--config", path.string(), "order", "sign", "--order", "dehornoy:b3", "--element", "s1"}).code, 2);
}

TEST(Cli, RealizeThenCrossings) {
  const auto path = temp_file("table.json");
  Outcome w = run({"realize", "--order", "dehornoy:b3", "--count", "150", "--out", path.string()});
  ASSERT_EQ(w.code, 0) << w.err;
  std::ifstream in(path);
  json table = json::parse(in);
  EXPECT_EQ(table["enumeration"].size(), 150u);
  EXPECT_EQ(table["t"].size(), 150u);
  json c = run_json({"crossings", "--table", path.string(), "--expect", "witness"});
  EXPECT_EQ(c["result"], "witness");
  std::filesystem::remove(path);

  const auto lex = temp_file("lex.json");
  ASSERT_EQ(run({"realize", "--order", "zn:lex:2", "--count", "100", "--out", lex.string()}).code, 0);
  EXPECT_EQ(run({"crossings", "--table", lex.string(), "--expect", "none"}).code, 0);
  EXPECT_EQ(run({"crossings", "--table", lex.string(), "--expect", "witness"}).code, 1);
  std::filesystem::remove(lex);
  EXPECT_EQ(run({"crossings", "--table", lex.string()}).code, 2);
}

TEST(Cli, Selftest) {
  Outcome ok = run({"selftest", "--filter", "1,2"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("PASS  1"), std::string::npos) << ok.out;
  Outcome bad = run({"selftest", "--filter", "1", "--inject-fault", "handle-reduction"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL  1"), std::string::npos) << bad.out;
  // the fault does not leak into later runs
  EXPECT_EQ(run({"selftest", "--filter", "1"}).code, 0);
}
