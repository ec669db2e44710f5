#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sumprod/cli.hpp"

using namespace sumprod;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the built binary; returns (exit status, stdout).
std::pair<int, std::string> run_binary(const std::string& args) {
  const std::string cmd = std::string(SUMPROD_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST(Cli, DecomposeJson) {
  const auto r = run({"decompose", "--field", "Q", "--x=-1", "--k", "4", "--sum", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["elements"], Json::parse(R"(["1/2","1/2","2","-2"])"));
  EXPECT_EQ(j["verified"], true);
  EXPECT_EQ(j["field"], "Q");
  EXPECT_EQ(j["constraint"]["kind"], "sum");
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"field", "x", "k", "constraint", "elements", "route", "verified"}));
}

TEST(Cli, DecomposeProductAndBothAndOdd) {
  auto r = run({"decompose", "--field", "Fp:5", "--x", "1", "--k", "4", "--product", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["elements"], Json::parse(R"(["1","4","3","3"])"));
  r = run({"both", "--field", "Q", "--x", "5", "--k", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["elements"], Json::parse(R"(["9/2","2","-2/3","-5/6"])"));
  r = run({"odd", "--field", "Fp:5", "--x", "3", "--k", "5", "--sqrt-minus-one"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["elements"], Json::parse(R"(["3","2","3","1","4"])"));
  r = run({"decompose", "--field", "Q", "--x", "2", "--k", "4", "--both", "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Q x=2 k=4"), std::string::npos);
  r = run({"decompose", "--field", "Q", "--x", "2", "--k", "4", "--both", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("field,x,k,constraint,elements,route,verified\n", 0), 0u);
}

TEST(Cli, Verify) {
  auto r = run({"verify", "--field", "Q", "--elements", "1/2,1/2,2,-2", "--sum", "1", "--product=-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["verified"], true);
  r = run({"verify", "--field", "Q", "--elements", "1/2,1/2,2,-2", "--sum", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["verified"], false);
  r = run({"verify", "--field", "Fq:3^2", "--elements", "1,1;2,2", "--sum", "0,0", "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("verified=true", 0), 0u);
}

TEST(Cli, DomainErrorsExitOne) {
  auto r = run({"decompose", "--field", "Fp:3", "--x", "0", "--k", "4", "--product=-1"});
  EXPECT_EQ(r.code, 1);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["error"], "NotCovered");
  r = run({"decompose", "--field", "Fp:2", "--x", "0", "--k", "4", "--both"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["error"], "EvenCharacteristic");
  r = run({"decompose", "--field", "Q", "--x", "1", "--k", "4", "--sum", "0", "--format", "text"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ZeroAlpha"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"decompose", "--field", "Q", "--x", "1", "--k", "4"}).code, 2);
  EXPECT_EQ(run({"decompose", "--field", "Q", "--x", "1", "--k", "4", "--sum", "1", "--both"}).code, 2);
  EXPECT_EQ(run({"decompose", "--field", "Q", "--x", "1", "--k", "4", "--product", "2"}).code, 2);
  EXPECT_EQ(run({"decompose", "--field", "Q", "--x", "1", "--k", "four", "--both"}).code, 2);
  EXPECT_EQ(run({"identities", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> args{"decompose", "--field", "Fq:3^2", "--x", "2,1", "--k", "7", "--product", "1"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run(args).out);
  EXPECT_EQ(run({"identities"}).out, run({"identities"}).out);
}

TEST(Cli, IdentitiesReportVerdicts) {
  const auto r = run({"identities", "--format", "text"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("THM11_K4 Verified"), std::string::npos);
  EXPECT_NE(r.out.find("THM12II FailsBoth"), std::string::npos);
  EXPECT_NE(r.out.find("ELKIES FailsBoth"), std::string::npos);
}

TEST(Cli, ScanStreamsCsvToFile) {
  const auto path = std::filesystem::temp_directory_path() / "sumprod_scan_test.csv";
  const auto r = run({"scan", "--field", "Fp:3", "--k", "4", "--constraint", "product:-1", "--format", "csv", "--out",
                      path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "q,k,constraint,x,exists,witness");
  EXPECT_EQ(lines[1].substr(0, 4), "3,4,");
  EXPECT_NE(lines[1].find(",0,false,"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, ConjectureAndProbe) {
  auto r = run({"conjecture", "--max-prime", "13"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["max_prime"], 13);
  r = run({"char3probe", "--max-q", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["supports_guess"], true);
}

TEST(CliBinary, RoundTripDecomposeThenVerify) {
  const auto [code, out] = run_binary("decompose --field Q --x=7/3 --k 6 --sum 2");
  ASSERT_EQ(code, 0);
  const auto j = Json::parse(out);
  std::string elements;
  for (const auto& e : j["elements"]) elements += (elements.empty() ? "" : ",") + e.get<std::string>();
  const auto [vcode, vout] = run_binary("verify --field Q --elements=" + elements + " --sum 2 --product=7/3");
  EXPECT_EQ(vcode, 0) << vout;
  EXPECT_EQ(Json::parse(vout)["verified"], true);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("decompose --field Fp:3 --x 0 --k 4 --product=-1").first, 1);
  EXPECT_EQ(run_binary("decompose --field Q").first, 2);
  EXPECT_EQ(run_binary("identities --format text").first, 0);
}
