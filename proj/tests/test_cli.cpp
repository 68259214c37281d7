#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace qsf::cli;
using nlohmann::json;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qsf_cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("eval emits one json record") {
  const Run r = run({"eval", "--func", "I2", "--q", "0.5", "--nu", "0.75", "--s", "1.0", "--format", "json"});
  CHECK(r.code == kExitPass);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["func"] == "I2");
  CHECK(j[0]["terms"].get<int>() > 0);
  CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("eval reports per-row errors") {
  Run r = run({"eval", "--func", "K1", "--nu", "1.0", "--q", "0.5", "--s", "1"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("IntegerOrderError") != std::string::npos);
  r = run({"eval", "--func", "I1", "--s", "100", "--q", "0.9", "--nu", "0.75"});
  CHECK(r.out.find("RadiusError") != std::string::npos);
}

TEST_CASE("eval rows are ordered") {
  const Run r = run({"eval", "--func", "J2,I2", "--q", "0.7,0.3", "--nu", "1", "--s", "2,1"});
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "func,q,nu,s,value_re,value_im,terms,notes");
  CHECK(rows[1].rfind("J2,0.3,1,1,", 0) == 0);
  CHECK(rows[2].rfind("J2,0.3,1,2,", 0) == 0);
  CHECK(rows[5].rfind("I2,0.3,1,1,", 0) == 0);
}

TEST_CASE("verify exit codes") {
  CHECK(run({"verify", "--rep", "K1_line", "--nu", "0.4"}).code == kExitUsage);
  CHECK(run({"verify", "--rep", "I1_unit", "--q", "0.5", "--nu", "0.75"}).code == kExitPass);
  const Run tight = run({"verify", "--rep", "I1_unit", "--q", "0.5", "--nu", "0.75", "--tol", "1e-15"});
  CHECK(tight.code == kExitFail);
  CHECK(tight.err.find("summary I1_unit") != std::string::npos);
  CHECK(run({"verify", "--rep", "nope"}).code == kExitUsage);
  CHECK(run({"verify", "--q", "1.2"}).code == kExitUsage);
  CHECK(run({"eval", "--func", "I1"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
}

TEST_CASE("verify csv header and json mirror") {
  const Run c = run({"verify", "--rep", "J1_unit", "--q", "0.3", "--nu", "1.5"});
  CHECK(c.out.rfind("rep,q,nu,s,lhs_re,lhs_im,rhs_re,rhs_im,rel_residual,pass,notes\n", 0) == 0);
  const Run j = run({"verify", "--rep", "J1_unit,K2_half", "--q", "0.3", "--nu", "2.5", "--s", "1", "--format", "json"});
  CHECK(j.code == kExitFail);
  const json doc = json::parse(j.out);
  REQUIRE(doc["records"].size() == 2);
  CHECK(doc["records"][0]["rep"] == "J1_unit");
  CHECK(doc["records"][1]["rel_residual"].is_null());
  CHECK(json::parse(doc.dump()) == doc);
  for (const char* key : {"rep", "q", "nu", "s", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_residual", "pass", "notes"})
    CHECK(doc["records"][0].contains(key));
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"table", "--q", "0.5", "--nu", "0.75"};
  CHECK(run(args).out == run(args).out);
}
