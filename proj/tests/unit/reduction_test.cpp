#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "lm/gen.hpp"
#include "lm/reduction.hpp"
#include "oracle.hpp"

using namespace lm;

namespace {
Object P(const char* s) { return parse_any(s); }

std::vector<Step> at_root(const Object& o, Rule r) {
  std::vector<Step> out;
  for (auto& s : steps(o, {r}))
    if (s.path.empty()) out.push_back(s);
  return out;
}

Object one(const Object& o, Rule r, const Path& p = {}) {
  for (auto& s : steps(o, {r}))
    if (s.path == p) return s.after;
  FAIL("no step");
  return o;
}

// All objects reachable within `depth` steps, keyed up to α.
std::set<std::string> reach(const Object& o, const RuleSet& rules, int depth, std::size_t cap = 3000) {
  std::set<std::string> seen{alpha_key(o)};
  std::vector<Object> frontier{o};
  for (int d = 0; d < depth && !frontier.empty() && seen.size() < cap; ++d) {
    std::vector<Object> next;
    for (auto& x : frontier)
      for (auto& s : steps(x, rules))
        if (seen.insert(alpha_key(s.after)).second) next.push_back(s.after);
    frontier = std::move(next);
  }
  return seen;
}

bool joins(const Object& a, const Object& b) {
  return alpha_equal(plain_normal_form(a), plain_normal_form(b));
}
}  // namespace

TEST_CASE("rule steps on the reference examples") {
  CHECK(alpha_equal(one(P("(\\x.x) y"), Rule::dB), P("x[x := y]")));
  CHECK(alpha_equal(one(P("x[x := y]"), Rule::S), P("y")));
  CHECK(alpha_equal(one(P("(mu 'a. ['a] x) y"), Rule::dM), P("mu 'a1. (['a] x)['a := y > 'a1]")));
  CHECK(alpha_equal(one(P("(['a] x)['a := y > 'g]"), Rule::N), P("['g] x y")));
  CHECK(alpha_equal(one(P("(['b] x)['a := y > 'g]"), Rule::Rnl), P("['b] x")));
  CHECK(alpha_equal(one(P("(['b] (x (mu 'd. ['a] z)))['a := y > 'g]"), Rule::Nnl),
                    P("['b] (x (mu 'd. ['g] z y))")));
  CHECK(alpha_equal(one(P("((['g] x)['g ~> 'a])['a := y > 'b]"), Rule::W),
                    P("((['g] x)['g := y > 'a])['a ~> 'b]")));
  CHECK(alpha_equal(one(P("(mu 'a. ['b] x) y"), Rule::MuLM), P("mu 'a. ['b] x")));
  CHECK(alpha_equal(one(P("(\\x. x x) y"), Rule::Beta), P("y y")));
}

TEST_CASE("dB and dM keep the argument outside the binder") {
  Object r = one(P("(\\y. x) y"), Rule::dB);
  REQUIRE(r->kind == Kind::ESub);
  CHECK(r->kids[1]->fv == IdSet{"y"});
  Object m = one(P("(mu 'a. ['a] x) (mu 'c. ['a] y)"), Rule::dM);
  REQUIRE(m->kind == Kind::Mu);
  CHECK(m->kids[0]->kind == Kind::ERepl);
  CHECK(m->fn == IdSet{"a"});
}

TEST_CASE("plain steps strictly decrease the weight") {
  CHECK(plain_weight(P("x")) == 3);
  CHECK(plain_weight(P("(\\x.x) y")) == 9);
  CHECK(plain_weight(P("x[x := y]")) == 6);
  std::mt19937_64 rng(11);
  GenConfig cfg;
  cfg.maxSize = 20;
  for (int i = 0; i < 200; ++i) {
    Object o = gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng);
    CHECK(plain_weight(o) == oracle::weight(oracle::tree(o)));
    for (auto& s : steps(o, plain_rules())) CHECK(plain_weight(s.after) < plain_weight(o));
  }
}

TEST_CASE("plain forms") {
  CHECK(is_plain_form(P("\\x. x[x := y]")));
  CHECK(is_plain_form(P("(['b] x)['a := y > 'g]")));
  CHECK_FALSE(is_plain_form(P("(['a] x)['a := y > 'b]")));
  CHECK_FALSE(is_plain_form(P("(\\x. x) y")));
  CHECK(alpha_equal(plain_normal_form(P("(mu 'a. ['a] x) y")), P("mu 'a1. ['a1] x y")));
}

TEST_CASE("exactly one replacement rule fires on each explicit replacement") {
  const RuleSet repl{Rule::N, Rule::C, Rule::W, Rule::Nnl, Rule::Cnl, Rule::Wnl, Rule::Rnl};
  std::mt19937_64 rng(5);
  GenConfig cfg;
  cfg.maxSize = 16;
  int seen = 0;
  for (int i = 0; i < 300; ++i) {
    Object o = gen_object(cfg, Sort::Command, rng);
    std::map<Path, int> per;
    for (auto& s : steps(o, repl)) ++per[s.path];
    std::vector<Path> todo{{}};
    while (!todo.empty()) {
      Path p = todo.back();
      todo.pop_back();
      const Object& n = at(o, p);
      if (n->kind == Kind::ERepl) {
        ++seen;
        CHECK_MESSAGE(per[p] == 1, render(o), " at ", path_string(p));
      }
      for (int k = 0; k < static_cast<int>(n->kids.size()); ++k) {
        Path q = p;
        q.push_back(k);
        todo.push_back(q);
      }
    }
  }
  CHECK(seen > 100);
}

TEST_CASE("meaningful steps require plain input") {
  CHECK_THROWS_AS(meaningful_steps(P("(\\x. x) y")), NotPlainForm);
  auto ms = meaningful_steps(P("y[x := z]"));
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].rule == Rule::S);
  CHECK(alpha_equal(ms[0].after, P("y")));
}

TEST_CASE("lmu steps need a pure object") {
  CHECK_THROWS_AS(lmu_steps(P("x[x := y]")), NotLambdaMu);
  CHECK(lmu_steps(P("(\\x. x) y")).size() == 1);
}

TEST_CASE("critical pair N against C") {
  Object o = P("((['d] x)['d := y > 'a])['a := z > 'b]");
  auto c = at_root(o, Rule::C);
  REQUIRE(c.size() == 1);
  CHECK(alpha_equal(c[0].after, P("(['d] x)['d := y, z > 'b]")));
  Object n = one(o, Rule::N, {0});
  CHECK(alpha_equal(n, P("(['a] x y)['a := z > 'b]")));
  CHECK(alpha_equal(plain_normal_form(c[0].after), P("['b] x y z")));
  CHECK(joins(c[0].after, n));
}

TEST_CASE("critical pair C against C") {
  Object o = P("(((['g] x)['g := w > 'd])['d := y > 'a])['a := z > 'b]");
  Object top = one(o, Rule::C, {});
  Object inner = one(o, Rule::C, {0});
  CHECK(alpha_equal(top, P("((['g] x)['g := w > 'd])['d := y, z > 'b]")));
  CHECK(alpha_equal(inner, P("((['g] x)['g := w, y > 'a])['a := z > 'b]")));
  CHECK(!steps(o, {Rule::N}).empty());
  CHECK(joins(top, inner));
  CHECK(alpha_equal(plain_normal_form(o), P("['b] x w y z")));
}

TEST_CASE("critical pair W against C") {
  Object o = P("(((['g] x)['g ~> 'd])['d := y > 'a])['a := z > 'b]");
  Object c = one(o, Rule::C, {});
  Object w = one(o, Rule::W, {0});
  CHECK(alpha_equal(c, P("((['g] x)['g ~> 'd])['d := y, z > 'b]")));
  CHECK(alpha_equal(w, P("(((['g] x)['g := y > 'd])['d ~> 'a])['a := z > 'b]")));
  CHECK(alpha_equal(plain_normal_form(o), P("(['d] x y z)['d ~> 'b]")));
  CHECK(joins(c, w));
}

TEST_CASE("plain reduction is confluent on generated objects") {
  std::mt19937_64 rng(3);
  GenConfig cfg;
  cfg.maxSize = 20;
  for (int i = 0; i < 150; ++i) {
    Object o = gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng);
    Object nf = plain_normal_form(o);
    CHECK(is_plain_form(nf));
    for (int k = 0; k < 5; ++k) CHECK(alpha_equal(plain_normal_form_random(o, rng), nf));
  }
}

TEST_CASE("lmu steps are refined by sequences of calculus steps") {
  std::mt19937_64 rng(9);
  GenConfig cfg;
  cfg.maxSize = 9;
  cfg.weights.esub = cfg.weights.erepl = cfg.weights.eren = 0;
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Object o = gen_object(cfg, Sort::Term, rng);
    if (!is_lambda_mu(o)) continue;
    auto r = reach(o, all_rules(), 8);
    for (auto& s : lmu_steps(o)) {
      ++checked;
      CHECK_MESSAGE(r.count(alpha_key(s.after)) > 0, render(o), " -> ", render(s.after));
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("full calculus peaks rejoin") {
  std::mt19937_64 rng(21);
  GenConfig cfg;
  cfg.maxSize = 9;
  for (int i = 0; i < 40; ++i) {
    Object o = gen_object(cfg, Sort::Term, rng);
    auto ss = steps(o, all_rules());
    if (ss.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, ss.size() - 1);
    Object a = ss[pick(rng)].after, b = ss[pick(rng)].after;
    auto ra = reach(a, all_rules(), 6), rb = reach(b, all_rules(), 6);
    bool meet = false;
    for (auto& k : ra) meet = meet || rb.count(k);
    CHECK_MESSAGE(meet, render(o));
  }
}
