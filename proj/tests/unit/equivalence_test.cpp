#include <random>

#include "doctest.h"
#include "lm/equivalence.hpp"
#include "lm/gen.hpp"

using namespace lm;

namespace {
Object P(const char* s) { return parse_any(s); }
using K = Verdict::Kind;
}  // namespace

TEST_CASE("sigma equivalence basics") {
  CHECK(sigma_equiv(P("\\x. x"), P("\\y. y")).kind == K::Equivalent);
  CHECK(sigma_equiv(P("x"), P("y")).kind == K::NotEquivalent);
  Verdict v = sigma_equiv(P("mu 'a. ['a] \\x. x"), P("\\x. x"));
  REQUIRE(v.kind == K::Equivalent);
  REQUIRE(v.path.size() == 1);
  CHECK(v.path[0].axiom == Axiom::theta);
  CHECK(replay(P("mu 'a. ['a] \\x. x"), P("\\x. x"), v.path, Family::Sigma));
}

TEST_CASE("sigma search preconditions") {
  CHECK_THROWS_AS(sigma_equiv(P("(\\x. x) y"), P("y")), NotPlainForm);
  CHECK_THROWS_AS(sigma_equiv(P("x"), P("['a] x")), SortMismatch);
  CHECK_THROWS_AS(laurent_equiv(P("x[x := y]"), P("y")), NotLambdaMu);
}

TEST_CASE("worked example: permuted replacement prefixes") {
  Object o = P("(['a] \\x. mu 'g. ['a] \\y. mu 'd. ['a] x (mu 'h. ['d] y))['a := w > 'b]");
  Object p = P("(['a] \\y. mu 'd. ['a] \\x. mu 'g. ['a] x (mu 'h. ['d] y))['a := w > 'b]");
  Verdict v = sigma_equiv(o, p);
  REQUIRE(v.kind == K::Equivalent);
  REQUIRE(v.path.size() == 1);
  CHECK(v.path[0].axiom == Axiom::ppop);

  Object o1 = P("['b] (mu 'g. ['b] (mu 'd. ['b] x (mu 'h. ['d] y) w)[y := w])[x := w]");
  Object p1 = P("['b] (mu 'd. ['b] (mu 'g. ['b] x (mu 'h. ['d] y) w)[x := w])[y := w]");
  auto mo = meaningful_steps(o), mp = meaningful_steps(p);
  REQUIRE(mo.size() == 1);
  REQUIRE(mp.size() == 1);
  CHECK(mo[0].rule == Rule::Rnl);
  CHECK(alpha_equal(mo[0].after, o1));
  CHECK(alpha_equal(mp[0].after, p1));
  Verdict w = sigma_equiv(o1, p1);
  REQUIRE(w.kind == K::Equivalent);
  std::vector<Axiom> ax;
  for (auto& s : w.path) ax.push_back(s.axiom);
  CHECK(ax == std::vector<Axiom>{Axiom::exsubs, Axiom::P, Axiom::exren, Axiom::P, Axiom::exsubs});
  CHECK(replay(o1, p1, w.path, Family::Sigma));
  CHECK(bisim_diagram(o, p).ok);
}

TEST_CASE("Laurent relation") {
  CHECK(laurent_equiv(P("(mu 'a. ['a] x) y"), P("mu 'a. ['a] x y")).kind == K::Equivalent);
  CHECK(laurent_equiv(P("x"), P("x y")).kind == K::NotEquivalent);
  CHECK(laurent_equiv(P("mu 'a. ['a] x"), P("x")).kind == K::Equivalent);
}

TEST_CASE("Laurent's relation is not a strong bisimulation") {
  BisimReport r = bisim_diagram(P("(mu 'a. ['a] x) y"), P("x y"), 50000, 1, true);
  CHECK_FALSE(r.ok);
  CHECK(r.failure.find("MuLM") != std::string::npos);
  CHECK(bisim_diagram(P("mu 'a. ['a] \\x. x"), P("\\x. x")).ok);
}

TEST_CASE("fexp undoes plain normalisation up to sigma") {
  Object o = P("(mu 'a. ['a] x) y");
  Object f = fexp(o);
  CHECK(is_lambda_mu(f));
  CHECK(alpha_equal(plain_normal_form(f), plain_normal_form(o)));
  Object c = P("(['a] x)['a := y > 'b]");
  CHECK(alpha_equal(fexp(c), P("['b] (mu 'a. ['a] x) y")));
}

TEST_CASE("generated pairs replay and are recognised") {
  std::mt19937_64 rng(17);
  GenConfig cfg;
  cfg.maxSize = 14;
  int eq = 0;
  for (int i = 0; i < 60; ++i) {
    EquivPair e = gen_equiv_pair(cfg, 2, rng);
    CHECK(replay(e.o, e.p, e.witness, Family::Sigma));
    Verdict v = sigma_equiv(e.o, e.p, 50000, false, 2);
    CHECK(v.kind != K::NotEquivalent);
    eq += v.kind == K::Equivalent;
    if (v.kind == K::Equivalent) CHECK(replay(e.o, e.p, v.path, Family::Sigma));
  }
  CHECK(eq >= 55);
}

TEST_CASE("moves keep sort and free identifiers") {
  std::mt19937_64 rng(19);
  GenConfig cfg;
  cfg.maxSize = 12;
  cfg.requirePlain = true;
  for (int i = 0; i < 50; ++i) {
    Object o = gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng);
    for (auto& m : moves(o, Family::Sigma, true)) {
      CHECK(sort_of(m.result) == sort_of(o));
      CHECK(m.result->fv == o->fv);
      CHECK(m.result->fn == o->fn);
    }
  }
}
