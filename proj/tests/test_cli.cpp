#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "psl2q/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = psl2q::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("classes command") {
  auto r = run({"classes", "--q", "7", "--format", "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.dump(2) + "\n" == r.out);  // byte-identical round trip
  CHECK(j["q"] == 7);
  CHECK(j["command"] == "classes");
  CHECK(j["result"]["group_order"] == 168);
  CHECK(j["result"]["classes"].size() == 6);
  CHECK(j["field"]["p"] == 7);

  auto csv = run({"classes", "--q", "7", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("selector,kind,order,size") == 0);

  auto table = run({"classes", "--q", "8"});
  CHECK(table.code == 0);
  CHECK(table.out.find("PSL2(8)") != std::string::npos);
}

TEST_CASE("table1 command") {
  auto r = run({"table1", "--qmax", "29"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("9 | 3 | 5 | 4") != std::string::npos);
  CHECK(r.out.find("23 | 23 | 2,3,6,11 | 4,12") != std::string::npos);
  CHECK(r.out.find("2 | 2 | 3 | --") != std::string::npos);

  auto j = json::parse(run({"table1", "--qmax", "29", "--format", "json"}).out);
  CHECK(j["result"]["rows"].size() == 16);
}

TEST_CASE("square command") {
  auto brute = run({"square", "--q", "8", "--class", "ord:9", "--format", "json"});
  REQUIRE(brute.code == 0);
  json jb = json::parse(brute.out);
  CHECK(jb["result"]["element_total"] == (8 - 1) * (8 * 8 - 1));

  auto closed = run({"square", "--q", "8", "--class", "ord:9", "--closed-form", "--format", "json"});
  REQUIRE(closed.code == 0);
  json jc = json::parse(closed.out);
  CHECK(jb["result"]["classes"] == jc["result"]["classes"]);
  CHECK(jc["result"]["set"] == "all-minus-unipotents");

  // every class except the single unipotent one shows up
  bool saw_unip = false;
  for (auto& c : jc["result"]["classes"])
    if (c["kind"] == "unipotent") saw_unip = true;
  CHECK_FALSE(saw_unip);
}

TEST_CASE("traces command") {
  auto r = run({"traces", "--q", "7", "--n", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["traces"] == json::array({3, 4}));
}

TEST_CASE("generation commands") {
  auto absent = run({"gen-pair", "--q", "9", "--class", "unip:sq"});
  CHECK(absent.code == 0);
  CHECK(absent.out.find("absent") != std::string::npos);
  CHECK(absent.out.find("PSL2(9)") != std::string::npos);

  auto present = run({"gen-pair", "--q", "7", "--class", "ord:3", "--format", "json"});
  REQUIRE(present.code == 0);
  json j = json::parse(present.out);
  CHECK(j["result"]["present"] == true);
  CHECK(j["result"]["closure_order"] == 168);
  CHECK(j["result"]["elements"].size() == 2);

  auto triple = run({"gen-triple", "--q", "7", "--class", "unip:sq", "--format", "json"});
  json jt = json::parse(triple.out);
  CHECK(jt["result"]["present"] == true);
  CHECK(jt["result"]["relation"] == "triple-product-1");

  // identical seeds give identical certificates
  auto a = run({"gen-pair", "--q", "11", "--class", "ord:5", "--seed", "5", "--format", "json"});
  auto b = run({"gen-pair", "--q", "11", "--class", "ord:5", "--seed", "5", "--format", "json"});
  CHECK(a.out == b.out);
}

TEST_CASE("factor command") {
  // [1,1,0,1] is unipotent; over q=7 it factors (prime field)
  auto r = run({"factor", "--q", "7", "--elem", "1,1,0,1", "--unipotent-factors", "--format", "json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["present"] == true);

  // over q=8 a unipotent element does not factor at all
  auto r8 = run({"factor", "--q", "8", "--elem", "1,1,0,1", "--format", "json"});
  REQUIRE(r8.code == 0);
  CHECK(json::parse(r8.out)["result"]["present"] == false);

  auto bad = run({"factor", "--q", "7", "--elem", "1,1,1,1"});
  CHECK(bad.code == 2);  // determinant 0
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--q", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ALL OK") != std::string::npos);

  auto j = json::parse(run({"verify", "--q", "8", "--format", "json"}).out);
  CHECK(j["result"]["all_ok"] == true);

  auto a = run({"verify", "--q", "9", "--seed", "1"});
  auto b = run({"verify", "--q", "9", "--seed", "1"});
  CHECK(a.out == b.out);
}

TEST_CASE("malformed input exits with 2") {
  CHECK(run({"classes", "--q", "6"}).code == 2);           // not a prime power
  CHECK(run({"square", "--q", "7", "--class", "nope"}).code == 2);
  CHECK(run({"square", "--q", "7", "--class", "ord:9"}).code == 2);  // no such order
  CHECK(run({"traces"}).code == 2);                        // missing options
  CHECK(run({"gen-pair", "--q", "7", "--class", "id"}).code == 2);
  CHECK(run({"factor", "--q", "7", "--elem", "1,0,0"}).code == 2);
}

TEST_CASE("output redirection") {
  std::string path = "cli_out_test.json";
  auto r = run({"classes", "--q", "5", "--format", "json", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  json j;
  f >> j;
  CHECK(j["q"] == 5);
  f.close();
  std::remove(path.c_str());
}
