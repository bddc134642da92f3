#include <random>

#include "doctest.h"
#include "lm/gen.hpp"
#include "lm/typing.hpp"

using namespace lm;

namespace {
Object P(const char* s) { return parse_any(s); }

Derivation* find_rule(Derivation& d, TypingRule r) {
  if (d.rule == r) return &d;
  for (auto& p : d.premises)
    if (auto* f = find_rule(p, r)) return f;
  return nullptr;
}
}  // namespace

TEST_CASE("principal types") {
  CHECK(render_type(*infer(P("\\x. x")).type) == "A -> A");
  CHECK(render_type(*infer(P("\\x. mu 'a. ['a] x")).type) == "A -> A");
  Typing peirce = infer(P("\\y. mu 'a. ['a] y (\\x. mu 'b. ['a] x)"));
  CHECK(render_type(*peirce.type) == "((A -> B) -> A) -> A");
  CHECK(check(peirce.derivation).ok);
}

TEST_CASE("replacement typing") {
  Typing t = infer(P("(['a] x)['a := y > 'b]"));
  CHECK_FALSE(t.type.has_value());
  REQUIRE(t.gamma.count("x"));
  REQUIRE(t.gamma.count("y"));
  CHECK(type_equal(t.gamma["x"], arrow(t.gamma["y"], t.delta["b"])));
  CHECK(t.delta.size() == 1);
  CHECK(check(t.derivation).ok);
}

TEST_CASE("untypable objects") {
  CHECK_FALSE(try_infer(P("x x")).has_value());
  CHECK_THROWS_AS(infer(P("x x")), TypeFailure);
}

TEST_CASE("checker rejects broken derivations") {
  Typing t = infer(P("(['a] x)['a := y > 'b]"));
  Derivation d = t.derivation;
  Derivation* r = find_rule(d, TypingRule::Repl);
  REQUIRE(r != nullptr);
  r->conclusion.delta["b"] = base_type("Z");
  CHECK_FALSE(check(d).ok);

  Derivation v = infer(P("x")).derivation;
  v.conclusion.gamma["y"] = base_type("B");
  CHECK_FALSE(check(v).ok);
}

TEST_CASE("generated typable objects check and keep their types under reduction") {
  std::mt19937_64 rng(13);
  GenConfig cfg;
  cfg.maxSize = 14;
  cfg.requireTypable = true;
  for (int i = 0; i < 120; ++i) {
    Object o = gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng);
    Typing t = infer(o);
    CHECK(check(t.derivation).ok);
    for (auto& s : steps(o, all_rules())) {
      if (s.rule == Rule::Beta || s.rule == Rule::MuLM) continue;
      CHECK_MESSAGE(subject_step_check(o, s), render(o), " ", rule_name(s.rule));
    }
  }
}

TEST_CASE("type syntax round trips") {
  Type t = parse_type("(A -> B) -> C -> A");
  CHECK(render_type(t) == "(A -> B) -> C -> A");
  CHECK(type_equal(stack_arrow({base_type("A"), base_type("B")}, base_type("C")), parse_type("A -> B -> C")));
}
