#include <random>

#include "doctest.h"
#include "lm/gen.hpp"
#include "lm/syntax.hpp"
#include "oracle.hpp"

using namespace lm;

TEST_CASE("parse builds the expected trees") {
  Object o = parse("(\\x.x) y", Sort::Term);
  CHECK(o->kind == Kind::App);
  CHECK(o->kids[0]->kind == Kind::Abs);
  CHECK(o->kids[0]->id == "x");
  CHECK(o->kids[0]->kids[0]->kind == Kind::Var);
  CHECK(o->kids[1]->id == "y");

  Object r = parse("(['a] x)['a := y0, y1 > 'g]", Sort::Command);
  REQUIRE(r->kind == Kind::ERepl);
  CHECK(r->id == "a");
  CHECK(r->id2 == "g");
  CHECK(r->kids[0]->kind == Kind::Named);
  REQUIRE(r->kids[1]->kind == Kind::Stack);
  CHECK(r->kids[1]->kids.size() == 2);
}

TEST_CASE("sort errors and syntax errors are reported") {
  CHECK_THROWS_AS(parse("mu 'a. ['a] x", Sort::Command), SortError);
  CHECK_THROWS_AS(parse_any("(\\x. x"), SyntaxError);
  CHECK_THROWS_AS(parse_any("x'"), SyntaxError);
}

TEST_CASE("render prints canonical syntax with minimal parentheses") {
  CHECK(render(var("x")) == "x");
  CHECK(render(erepl(named("a", var("x")), "a", stack({var("y")}), "g")) == "(['a] x)['a := y > 'g]");
  CHECK(render(mu("a", named("a", app(var("x"), var("y"))))) == "mu 'a. ['a] x y");
  CHECK(render(app(var("x"), app(var("y"), var("z")))) == "x (y z)");
  CHECK(render(app(abs("x", var("x")), var("y"))) == "(\\x. x) y");
}

TEST_CASE("free identifiers") {
  Object r = parse_any("(['a] x)['a := y > 'g]");
  CHECK(r->fn == IdSet{"g"});
  CHECK(r->fv == IdSet{"x", "y"});
  CHECK(count_name(parse_any("['a] x"), "a") == 1);
  CHECK(parse_any("(['a] x)['a ~> 'b]")->fn == IdSet{"b"});
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_equal(parse_any("\\x.x"), parse_any("\\y.y")));
  CHECK(alpha_equal(parse_any("(['g] x)['b := z > 'a]"), parse_any("(['g] x)['c := z > 'a]")));
  CHECK_FALSE(alpha_equal(parse_any("['a] x"), parse_any("['b] x")));
  CHECK_FALSE(alpha_equal(parse_any("\\x. y"), parse_any("\\y. y")));
}

TEST_CASE("alpha_equal agrees with a nameless oracle on generated objects") {
  std::mt19937_64 rng(7);
  GenConfig cfg;
  cfg.maxSize = 14;
  std::vector<Object> pool;
  for (int i = 0; i < 300; ++i) pool.push_back(gen_object(cfg, i % 3 == 0 ? Sort::Command : Sort::Term, rng));
  for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
    CHECK(alpha_equal(pool[i], pool[i + 1]) == oracle::alpha(pool[i], pool[i + 1]));
    CHECK(oracle::alpha(pool[i], from_json(to_json(pool[i]))));
    CHECK(oracle::alpha(pool[i], parse(render(pool[i]), sort_of(pool[i]))));
  }
}

TEST_CASE("fresh names avoid everything in use") {
  FreshSupply fs(parse_any("\\x. x1 x2"));
  CHECK(fs.fresh("x") == "x3");
  CHECK(fs.fresh("x") == "x4");
  CHECK(fs.fresh("y7") == "y1");
}

TEST_CASE("smart constructors keep binders apart from the replacement stack") {
  FreshSupply fs(parse_any("x y"));
  Object c = erepl(named("a", var("x")), "a", stack({parse_any("mu 'a. ['a] y")}), "b", &fs);
  CHECK(c->fn == IdSet{"b"});
}

TEST_CASE("paths address sub-objects") {
  Object o = parse_any("\\x. x (y z)");
  CHECK(render(at(o, {0, 1})) == "y z");
  CHECK(render(replace_at(o, {0, 1}, var("w"))) == "\\x. x w");
  CHECK(path_string({0, 1}) == "[0,1]");
}
