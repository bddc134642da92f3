#include <random>

#include "doctest.h"
#include "lm/gen.hpp"
#include "lm/reduction.hpp"
#include "lm/typing.hpp"

using namespace lm;

TEST_CASE("generation is deterministic per seed") {
  GenConfig cfg;
  cfg.seed = 42;
  CHECK(alpha_key(gen_object(cfg, Sort::Term)) == alpha_key(gen_object(cfg, Sort::Term)));
}

TEST_CASE("generated objects respect the configuration") {
  std::mt19937_64 rng(1);
  GenConfig cfg;
  cfg.maxSize = 15;
  for (int i = 0; i < 300; ++i) {
    Sort s = i % 2 ? Sort::Command : Sort::Term;
    Object o = gen_object(cfg, s, rng);
    CHECK(sort_of(o) == s);
    CHECK(o->size <= cfg.maxSize);
    for (auto& x : o->fv) CHECK((x == "x" || x == "y" || x == "z"));
    for (auto& a : o->fn) CHECK((a == "a" || a == "b"));
  }
}

TEST_CASE("plain and typable filters") {
  std::mt19937_64 rng(2);
  GenConfig cfg;
  cfg.maxSize = 14;
  cfg.requirePlain = true;
  cfg.requireTypable = true;
  for (int i = 0; i < 100; ++i) {
    Object o = gen_object(cfg, Sort::Term, rng);
    CHECK(is_plain_form(o));
    CHECK(try_infer(o).has_value());
  }
}

TEST_CASE("exhaustion is reported") {
  GenConfig cfg;
  cfg.maxSize = 1;
  cfg.freeVars = {"x"};
  cfg.requireTypable = true;
  cfg.retries = 10;
  CHECK_THROWS_AS(gen_object(cfg, Sort::Command), GenerationExhausted);
}

TEST_CASE("shrinking keeps the failure and reduces size") {
  Object o = parse_any("(\\x. x y) ((\\z. z) (mu 'a. ['a] y))");
  auto c = shrink_candidates(o);
  CHECK_FALSE(c.empty());
  for (auto& s : c) CHECK(s->size < o->size);
  Object m = shrink(o, [](const Object& x) { return x->fv.size() >= 1 && contains(x->fv, "y"); });
  CHECK(render(m) == "y");
}
