#include <random>

#include "doctest.h"
#include "lm/gen.hpp"
#include "lm/proofnets.hpp"

using namespace lm;

namespace {
Object P(const char* s) { return parse_any(s); }

int count_links(const Net& n, LinkKind k) {
  int c = 0;
  for (auto& l : n.links) c += l.kind == k;
  return c;
}

Label var_label(const std::string& x) { return {Label::Kind::Var, x}; }
Label dist() { return {Label::Kind::Dist, ""}; }

// k axioms chained by k - 1 cuts.
Net axiom_chain(int k) {
  Net n;
  auto wire = [&](Formula f) {
    n.wires.push_back(f);
    return static_cast<int>(n.wires.size()) - 1;
  };
  std::vector<int> neg, pos;
  for (int i = 0; i < k; ++i) {
    int a = wire(f_atom("A")), b = wire(f_atom("A", true));
    n.links.push_back({LinkKind::Ax, {}, {a, b}, nullptr});
    neg.push_back(a);
    pos.push_back(b);
  }
  for (int i = 0; i + 1 < k; ++i) n.links.push_back({LinkKind::Cut, {pos[i], neg[i + 1]}, {}, nullptr});
  n.concl = {{neg[0], var_label("x")}, {pos[k - 1], dist()}};
  return n;
}

// Three axioms whose atom ends are contracted in the given bracketing.
Net contraction_tree(bool leftNested) {
  Net n;
  auto wire = [&](Formula f) {
    n.wires.push_back(f);
    return static_cast<int>(n.wires.size()) - 1;
  };
  std::vector<int> a, b;
  for (int i = 0; i < 3; ++i) {
    a.push_back(wire(f_atom("A")));
    b.push_back(wire(f_atom("A", true)));
    n.links.push_back({LinkKind::Ax, {}, {a[i], b[i]}, nullptr});
  }
  int mid = wire(f_atom("A")), top = wire(f_atom("A"));
  if (leftNested) {
    n.links.push_back({LinkKind::Contr, {a[0], a[1]}, {mid}, nullptr});
    n.links.push_back({LinkKind::Contr, {mid, a[2]}, {top}, nullptr});
  } else {
    n.links.push_back({LinkKind::Contr, {a[1], a[2]}, {mid}, nullptr});
    n.links.push_back({LinkKind::Contr, {a[0], mid}, {top}, nullptr});
  }
  n.concl = {{top, var_label("y")}, {b[0], var_label("x1")}, {b[1], var_label("x2")}, {b[2], var_label("x3")}};
  return n;
}

Net normal(const char* s) { return canonical_mnf(translate_object(P(s))); }
}  // namespace

TEST_CASE("type translation") {
  Type ii = arrow(base_type("i"), base_type("i"));
  CHECK(formula_equal(formula_of_type(ii), f_par(f_why(f_atom("i", true)), f_atom("i"))));
  CHECK(formula_equal(formula_of_stacktype({base_type("A"), base_type("B")}, base_type("C")),
                      formula_of_type(parse_type("A -> B -> C"))));
  CHECK(is_negative(f_par(f_atom("A"), f_atom("B"))));
  CHECK_FALSE(is_negative(f_bang(f_atom("A"))));
}

TEST_CASE("variable and abstraction nets") {
  Net v = translate_object(P("x"));
  CHECK(count_links(v, LinkKind::Ax) == 1);
  CHECK(count_links(v, LinkKind::Der) == 1);
  CHECK(v.links.size() == 2);
  CHECK(v.concl.size() == 2);
  CHECK(well_formed(v));

  Net w = translate_object(P("\\x. y"));
  CHECK(count_links(w, LinkKind::Weak) == 1);
  CHECK(count_links(w, LinkKind::Par) == 1);
  CHECK(well_formed(w));
}

TEST_CASE("labels distinguish free variables") {
  CHECK_FALSE(ppn_equiv(translate_object(P("x")), translate_object(P("y"))));
  CHECK(ppn_equiv(translate_object(P("x")), translate_object(P("x"))));
}

TEST_CASE("axiom chains collapse to a single axiom") {
  for (int k = 1; k <= 6; ++k) {
    Net n = axiom_chain(k);
    REQUIRE(well_formed(n));
    CHECK(cut_count(n, multiplicative_rules()) == static_cast<std::size_t>(k - 1));
    std::vector<PpnRule> trace;
    Net m = mult_normal_form(n, &trace);
    CHECK(trace.size() == static_cast<std::size_t>(k - 1));
    CHECK(m.links.size() == 1);
    CHECK(ppn_equiv(m, axiom_chain(1)));
  }
}

TEST_CASE("cut elimination steps") {
  Net b = translate_object(P("(\\x. x) y"));
  CHECK(cut_count(b, {PpnRule::TensorPar}) == 1);
  Net m = mult_normal_form(b);
  CHECK(cut_count(m, multiplicative_rules()) == 0);

  Net w = canonical_mnf(translate_object(P("(\\x. y) z")));
  auto s = ppn_steps(w, {PpnRule::BangWeak});
  REQUIRE(s.size() == 1);
  CHECK(count_links(s[0].second, LinkKind::Box) == 0);
  CHECK(net_size(s[0].second) < net_size(w));
}

TEST_CASE("distance and replacement steps have equal normal nets") {
  CHECK(ppn_equiv(normal("(\\x. x) y"), normal("x[x := y]")));
  CHECK(ppn_equiv(normal("(mu 'a. ['a] x) y"), normal("mu 'b. (['a] x)['a := y > 'b]")));
  CHECK(ppn_equiv(normal("mu 'a. ['a] \\x. x"), normal("\\x. x")));
  CHECK_FALSE(ppn_equiv(normal("\\x. \\y. x"), normal("\\x. \\y. y")));
}

TEST_CASE("structural equivalence reassociates contractions") {
  Net l = contraction_tree(true), r = contraction_tree(false);
  REQUIRE(well_formed(l));
  REQUIRE(well_formed(r));
  CHECK(ppn_equiv(l, r));
}

TEST_CASE("simulation of single steps") {
  Object o = P("(mu 'a. ['a] x) y");
  auto ss = steps(o, {Rule::dM});
  REQUIRE(ss.size() == 1);
  SimReport rep = simulate_check(o, ss[0]);
  CHECK(rep.ok);

  Object b = P("(\\x. x) y");
  auto bs = steps(b, {Rule::dB});
  REQUIRE(bs.size() == 1);
  SimReport rb = simulate_check(b, bs[0]);
  CHECK(rb.ok);
  for (PpnRule r : rb.sequence) CHECK((r == PpnRule::Ax || r == PpnRule::TensorPar));
}

TEST_CASE("generated typable objects translate to well-formed nets") {
  std::mt19937_64 rng(23);
  GenConfig cfg;
  cfg.maxSize = 12;
  cfg.requireTypable = true;
  for (int i = 0; i < 80; ++i) {
    Object o = gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng);
    Net n = translate_object(o);
    std::string why;
    CHECK_MESSAGE(well_formed(n, &why), render(o), " ", why);
    CHECK(well_formed(canonical_mnf(n)));
    CHECK(ppn_equiv(canonical_mnf(n), canonical_mnf(canonicalize(n))));
  }
}

TEST_CASE("untypable objects have no net") {
  CHECK_THROWS(translate_object(P("x x")));
}
