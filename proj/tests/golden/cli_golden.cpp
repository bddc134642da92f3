// Runs the command-line tool and compares its output with library results.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lm/equivalence.hpp"
#include "lm/reduction.hpp"
#include "lm/typing.hpp"

using namespace lm;

namespace {

struct Run {
  std::string out;
  int code;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run lm_run(const std::vector<std::string>& args) {
  const char* bin = std::getenv("LM_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = quote(bin);
  for (auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), f)) out.append(buf.data(), n);
  int st = pclose(f);
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return {out, WEXITSTATUS(st)};
}

}  // namespace

TEST_CASE("fcan") {
  Run r = lm_run({"fcan", "--sort", "term", "(mu 'a.['a] x) y"});
  CHECK(r.code == 0);
  CHECK(r.out == "mu 'a1. ['a1] x y");
  CHECK(r.out == render(plain_normal_form(parse("(mu 'a.['a] x) y", Sort::Term))));
}

TEST_CASE("typeof") {
  Run r = lm_run({"typeof", "\\x. mu 'a. ['a] (x (\\y. mu 'd. ['a] y))"});
  CHECK(r.code == 0);
  CHECK(r.out == "((A -> B) -> A) -> A");
  CHECK(lm_run({"typeof", "x x"}).code == 1);
}

TEST_CASE("parse and render") {
  Run p = lm_run({"parse", "(['a] x)['a := y > 'g]"});
  CHECK(p.code == 0);
  CHECK(p.out == to_json(parse_any("(['a] x)['a := y > 'g]")));
  Run r = lm_run({"render", p.out});
  CHECK(r.code == 0);
  CHECK(r.out == "(['a] x)['a := y > 'g]");
  CHECK(lm_run({"parse", "(\\x. x"}).code == 2);
  CHECK(lm_run({"parse", "--sort", "command", "mu 'a. ['a] x"}).code == 2);
  CHECK(lm_run({"no-such-command"}).code == 2);
}

TEST_CASE("weight and steps") {
  CHECK(lm_run({"weight", "(\\x.x) y"}).out == "9");
  Run s = lm_run({"steps", "--rules", "plain", "(mu 'a. ['a] x) y"});
  CHECK(s.code == 0);
  CHECK(s.out == "dM [] mu 'a1. (['a] x)['a := y > 'a1]");
  Run m = lm_run({"steps", "--rules", "meaningful", "(['b] x)['a := y > 'g]"});
  CHECK(m.out == "Rnl [] ['b] x");
}

TEST_CASE("reduce reports non-normal results") {
  CHECK(lm_run({"reduce", "--max", "1", "(\\x. x x) (\\x. x x)"}).code == 3);
  Run r = lm_run({"reduce", "(mu 'a. ['a] x) y"});
  CHECK(r.code == 0);
  CHECK(r.out.substr(r.out.rfind('\n') + 1) == "mu 'a1. ['a1] x y");
}

TEST_CASE("equivalence exit codes") {
  CHECK(lm_run({"equiv", "\\x.x", "\\y.y"}).code == 0);
  CHECK(lm_run({"equiv", "x", "y"}).code == 1);
  CHECK(lm_run({"equiv", "(\\x.x) y", "y"}).code == 2);
  CHECK(lm_run({"equiv", "--laurent", "(mu 'a.['a]x) y", "x y"}).code == 0);
  CHECK(lm_run({"equiv", "--er", "(['a] x)['a ~> 'b]", "['b] x"}).code == 0);
  CHECK(lm_run({"equiv", "(['a] x)['a := y > 'b]", "['b] x y"}).code == 2);
  Run t = lm_run({"equiv", "mu 'a. ['a] \\x. x", "\\x. x"});
  CHECK(t.code == 0);
  CHECK(t.out.find("theta") != std::string::npos);
}

TEST_CASE("json output matches the library") {
  Run r = lm_run({"--json", "equiv", "\\x.x", "\\y.y"});
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "Equivalent");
  Run t = lm_run({"--json", "typeof", "\\x. x"});
  CHECK(nlohmann::json::parse(t.out)["type"] == "A -> A");
  Run s = lm_run({"--json", "steps", "--rules", "plain", "(\\x.x) y"});
  auto sj = nlohmann::json::parse(s.out);
  REQUIRE(sj.is_array());
  REQUIRE(sj.size() == 1);
  CHECK(sj[0] == nlohmann::json::parse(step_to_json(steps(parse_any("(\\x.x) y"), plain_rules())[0])));
}

TEST_CASE("bisimulation diagrams") {
  CHECK(lm_run({"bisim", "--laurent", "(mu 'a.['a]x) y", "x y"}).code == 1);
  CHECK(lm_run({"bisim", "mu 'a.['a] x y", "x y"}).code == 0);
}

TEST_CASE("proof nets") {
  CHECK(lm_run({"ppn-equiv", "(\\x. x) y", "x[x := y]"}).code == 0);
  CHECK(lm_run({"ppn-equiv", "x", "y"}).code == 1);
  Run s = lm_run({"simulate", "(\\x. x) y"});
  CHECK(s.code == 0);
  CHECK(s.out.find("dB [] ok") == 0);
  CHECK(lm_run({"translate", "--dot", "x"}).out.find("digraph") != std::string::npos);
}

TEST_CASE("fexp and fuzz") {
  CHECK(lm_run({"fexp", "(['a] x)['a := y > 'b]"}).out == "['b] (mu 'a. ['a] x) y");
  Run f = lm_run({"fuzz", "weight", "--n", "50", "--seed", "3"});
  CHECK(f.code == 0);
  CHECK(f.out.find("weight: 50 cases") == 0);
}
