#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "costshare/io.hpp"

namespace costshare {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("costshare_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

double last_csv_ratio(const std::string& csv) {
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<std::string> fields;
  std::stringstream cells(row);
  std::string cell;
  while (std::getline(cells, cell, ',')) fields.push_back(cell);
  return std::stod(fields.at(5));
}

TEST_F(Cli, CycleTourPoaIsAtMostTwo) {
  ASSERT_EQ(run({"gen", "cycle", "--n", "8", "--seed", "3", "--out", path("c.json")}).code, cli::kExitOk);
  const Result r = run({"poa", "--instance", path("c.json"), "--protocol", "tour", "--adversarial"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kPoaCsvHeader);
  EXPECT_LE(last_csv_ratio(r.out), 2.0 + 1e-9);
}

TEST_F(Cli, GenerationIsByteIdentical) {
  for (const std::string kind : {"cycle", "outerplanar", "random-graph"}) {
    ASSERT_EQ(run({"gen", kind, "--n", "7", "--seed", "11", "--out", path("a.json")}).code, cli::kExitOk);
    ASSERT_EQ(run({"gen", kind, "--n", "7", "--seed", "11", "--out", path("b.json")}).code, cli::kExitOk);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json"))) << kind;
  }
}

TEST_F(Cli, QtildeOrderedRatio) {
  ASSERT_EQ(run({"gen", "qtilde", "--r", "1", "--out", path("q.json"), "--protocol-out", path("p.json")}).code,
            cli::kExitOk);
  const Result r = run({"poa", "--instance", path("q.json"), "--protocol", "order:" + path("p.json"), "--adversarial",
                        "--format", "json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["ratio"].get<double>(), 9.0 / 8.0, 1e-9);
}

TEST_F(Cli, VerifiesTheDepthThreeExampleCertificate) {
  Json path_json = Json::array();
  for (int i = 0; i <= 8; ++i) path_json.push_back(std::string(i, '1') + std::string(8 - i, '0'));
  const Json cert{{"n", 8}, {"r", 3}, {"path", path_json}, {"labels", {1, 8, 6, 7, 3, 5, 4, 9, 2}}};
  write_text_file(path("cert.json"), cert.dump());
  const Result ok = run({"zigzag", "verify", "--cert", path("cert.json")});
  EXPECT_EQ(ok.code, cli::kExitOk);
  EXPECT_EQ(ok.out, "VALID\n");

  Json bad = cert;
  bad["labels"] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  write_text_file(path("bad.json"), bad.dump());
  EXPECT_EQ(run({"zigzag", "verify", "--cert", path("bad.json")}).code, cli::kExitValidation);
}

TEST_F(Cli, ZigzagFindRoundTrip) {
  const Result found = run({"zigzag", "find", "--n", "4", "--r", "2", "--labeling", "random", "--seed", "7", "--out",
                            path("found.json")});
  ASSERT_EQ(found.code, cli::kExitOk) << found.err;
  EXPECT_EQ(run({"zigzag", "verify", "--cert", path("found.json")}).code, cli::kExitOk);
}

TEST_F(Cli, ExitCodes) {
  const Result no_seed = run({"gen", "cycle", "--n", "5"});
  EXPECT_EQ(no_seed.code, cli::kExitValidation);
  EXPECT_EQ(Json::parse(no_seed.err)["error"], "Validation");

  const Result missing = run({"poa", "--instance", path("nope.json"), "--adversarial"});
  EXPECT_EQ(missing.code, cli::kExitValidation);
  EXPECT_TRUE(Json::parse(missing.err).contains("message"));

  EXPECT_EQ(run({"no-such-command"}).code, cli::kExitValidation);

  const Result impossible = run({"zigzag", "find", "--n", "1", "--r", "1", "--labeling", "random", "--seed", "1"});
  EXPECT_EQ(impossible.code, cli::kExitSolver);
  EXPECT_EQ(Json::parse(impossible.err)["error"], "NotFoundWithinBudget");
}

TEST_F(Cli, EquilibriumWithRepeatedPlayer) {
  write_text_file(path("p.json"), R"({"vertices":["t","a","b"],"root":"t","edges":[["t","a",1],["a","b",1]]})");
  const Result r = run({"ne", "--instance", path("p.json"), "--protocol", "shapley", "--players", "b,b", "--method",
                        "enumerate"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["players"], Json::parse(R"(["b", "b'"])"));
  ASSERT_EQ(j["equilibria"].size(), 1u);
  EXPECT_TRUE(j["equilibria"][0]["is_nash"].get<bool>());
  EXPECT_DOUBLE_EQ(j["equilibria"][0]["social_cost"].get<double>(), 2.0);
}

TEST_F(Cli, StochasticOrderAndEvaluation) {
  ASSERT_EQ(run({"gen", "random-graph", "--n", "7", "--seed", "5", "--probs", "--out", path("g.json")}).code,
            cli::kExitOk);
  const Result derand =
      run({"stochastic", "order", "--instance", path("g.json"), "--mode", "derand", "--seed", "5", "--out", path("o.json")});
  ASSERT_EQ(derand.code, cli::kExitOk) << derand.err;
  const Json order = read_json_file(path("o.json"));
  EXPECT_EQ(order["order"].size(), 6u);
  EXPECT_EQ(order["provenance"]["kind"], "derandomized");
  const Result eval = run({"stochastic", "eval", "--instance", path("g.json"), "--order", path("o.json"), "--exact"});
  ASSERT_EQ(eval.code, cli::kExitOk) << eval.err;
  EXPECT_LE(last_csv_ratio(eval.out), 8.0);

  const Result rand_a = run({"stochastic", "order", "--instance", path("g.json"), "--mode", "rand", "--seed", "9"});
  const Result rand_b = run({"stochastic", "order", "--instance", path("g.json"), "--mode", "rand", "--seed", "9"});
  EXPECT_EQ(rand_a.out, rand_b.out);
}

TEST_F(Cli, LemmaChecks) {
  const Result one = run({"lemmas", "one-connection", "--m", "2"});
  ASSERT_EQ(one.code, cli::kExitOk);
  EXPECT_TRUE(Json::parse(one.out)["ok"].get<bool>());
  EXPECT_EQ(run({"lemmas", "rainbow", "--m", "3", "--trials", "20", "--seed", "1"}).code, cli::kExitOk);
  EXPECT_EQ(run({"lemmas", "nonconsecutive", "--m", "4", "--trials", "20", "--seed", "1"}).code, cli::kExitOk);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv("COSTSHARE_OUTPUT_DIR", dir_.c_str(), 1);
  const Result r = run({"gen", "outerplanar", "--n", "6", "--seed", "2", "--out", "rel.json"});
  ::unsetenv("COSTSHARE_OUTPUT_DIR");
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "rel.json"));
}

}  // namespace
}  // namespace costshare
