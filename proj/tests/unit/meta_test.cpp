#include "doctest.h"
#include "lm/meta.hpp"
#include "oracle.hpp"

using namespace lm;

namespace {
Object P(const char* s) { return parse_any(s); }
}  // namespace

TEST_CASE("substitution") {
  CHECK(alpha_equal(substitute(P("(mu 'a.['a]x) (\\z. z x)"), "x", P("\\w.w")),
                    P("(mu 'a.['a](\\w.w)) (\\z. z (\\w.w))")));
  CHECK(alpha_equal(substitute(P("y"), "x", P("u")), P("y")));
  Object r = substitute(P("\\y. x"), "x", P("y"));
  CHECK(render(r) == "\\y1. y");
}

TEST_CASE("implicit replacement table") {
  Object s2 = stack({var("y0"), var("y1")});
  CHECK(render(replace(P("['a] x"), "a", s2, "g")) == "['g] x y0 y1");
  CHECK(alpha_equal(replace(P("(['a] x)['b := z0 > 'a]"), "a", stack({var("y0")}), "g"),
                    P("(['g] x y0)['b := z0, y0 > 'g]")));
  Object blocked = replace(P("(['a] x)['b ~> 'a]"), "a", s2, "g");
  REQUIRE(blocked->kind == Kind::ERen);
  CHECK(blocked->id2 == "g");
  CHECK(blocked->id != "g");
  CHECK(alpha_equal(blocked, P("((['g] x y0 y1)['b := y0, y1 > 'g1])['g1 ~> 'g]")));
}

TEST_CASE("replacement agrees with a direct oracle on clash-free commands") {
  const char* cases[] = {
      "['a] x",
      "['a] x (mu 'd. ['a] z)",
      "(['d] x)['d := y > 'a]",
      "['b] \\v. (mu 'd. ['a] v) (mu 'e. ['a] w)",
      "(['a] x)['d := mu 'e. ['a] y > 'b]",
  };
  Object s = stack({var("p"), var("q")});
  for (const char* c : cases) {
    Object o = P(c);
    Object got = replace(o, "a", s, "g");
    oracle::json want = oracle::replace(oracle::tree(o), "a", oracle::tree(s)["items"], "g");
    CHECK_MESSAGE(oracle::alpha(got, from_json(want.dump())), c);
  }
}

TEST_CASE("renaming table") {
  CHECK(render(rename_name(P("['a] x"), "a", "b")) == "['b] x");
  CHECK(alpha_equal(rename_name(P("(['c] x)['d := y > 'a]"), "a", "b"), P("(['c] x)['d := y > 'b]")));
  CHECK(render(rename_name(P("['c] x"), "a", "b")) == "['c] x");
  Object captured = rename_name(P("mu 'b. ['a] x"), "a", "b");
  CHECK(captured->fn == IdSet{"b"});
}

TEST_CASE("stack application") {
  CHECK(render(apply_stack(var("x"), stack({var("y0"), var("y1")}))) == "x y0 y1");
  CHECK(render(apply_stack(var("x"), stack({var("y")}))) == "x y");
  CHECK(alpha_equal(apply_stack(apply_stack(var("x"), stack({var("y")})), stack({var("z")})),
                    apply_stack(var("x"), stack({var("y"), var("z")}))));
}

TEST_CASE("free names after replacement and idempotence on absent identifiers") {
  Object o = P("(['a] x)['d := y > 'a]");
  Object r = replace(o, "a", stack({P("mu 'e. ['h] z")}), "g");
  CHECK(count_name(r, "a") == 0);
  CHECK(r->fn == IdSet{"g", "h"});
  CHECK(alpha_equal(substitute(o, "q", var("z")), o));
  CHECK(alpha_equal(rename_name(o, "q", "r"), o));
}
