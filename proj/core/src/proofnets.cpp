#include "lm/proofnets.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

#include "json.hpp"

namespace lm {

// ---------------------------------------------------------------------------
// Formulas.

namespace {
Formula make_formula(FormulaNode::Tag tag, std::string atom, Formula l, Formula r) {
  auto f = std::make_shared<FormulaNode>();
  f->tag = tag;
  f->atom = std::move(atom);
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}
}  // namespace

Formula f_atom(const std::string& a, bool negated) {
  return make_formula(negated ? FormulaNode::Tag::NegAtom : FormulaNode::Tag::Atom, a, nullptr, nullptr);
}
Formula f_par(const Formula& a, const Formula& b) { return make_formula(FormulaNode::Tag::Par, "", a, b); }
Formula f_tensor(const Formula& a, const Formula& b) {
  return make_formula(FormulaNode::Tag::Tensor, "", a, b);
}
Formula f_why(const Formula& a) { return make_formula(FormulaNode::Tag::Why, "", a, nullptr); }
Formula f_bang(const Formula& a) { return make_formula(FormulaNode::Tag::Bang, "", a, nullptr); }

Formula negate(const Formula& f) {
  using T = FormulaNode::Tag;
  switch (f->tag) {
    case T::Atom:
      return f_atom(f->atom, true);
    case T::NegAtom:
      return f_atom(f->atom, false);
    case T::Par:
      return f_tensor(negate(f->left), negate(f->right));
    case T::Tensor:
      return f_par(negate(f->left), negate(f->right));
    case T::Why:
      return f_bang(negate(f->left));
    case T::Bang:
      return f_why(negate(f->left));
  }
  return f;
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->tag != b->tag || a->atom != b->atom) return false;
  if (a->left && !formula_equal(a->left, b->left)) return false;
  if (a->right && !formula_equal(a->right, b->right)) return false;
  return true;
}

bool is_negative(const Formula& f) {
  using T = FormulaNode::Tag;
  return f->tag == T::Atom || f->tag == T::Par || f->tag == T::Why;
}

std::string render_formula(const Formula& f) {
  using T = FormulaNode::Tag;
  auto sub = [](const Formula& g) {
    std::string s = render_formula(g);
    return (g->tag == T::Par || g->tag == T::Tensor) ? "(" + s + ")" : s;
  };
  switch (f->tag) {
    case T::Atom:
      return f->atom;
    case T::NegAtom:
      return f->atom + "^";
    case T::Par:
      return sub(f->left) + " | " + sub(f->right);
    case T::Tensor:
      return sub(f->left) + " * " + sub(f->right);
    case T::Why:
      return "?" + sub(f->left);
    case T::Bang:
      return "!" + sub(f->left);
  }
  return "";
}

Formula formula_of_type(const Type& t) {
  switch (t->tag) {
    case TypeNode::Tag::Base:
      return f_atom(t->base);
    case TypeNode::Tag::Arrow:
      return f_par(f_why(negate(formula_of_type(t->dom))), formula_of_type(t->cod));
    case TypeNode::Tag::Meta:
      throw PreconditionError("formula_of_type: unresolved type variable");
  }
  return nullptr;
}

Formula formula_of_stacktype(const std::vector<Type>& s, const Type& b) {
  return formula_of_type(stack_arrow(s, b));
}

const char* link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Ax:
      return "ax";
    case LinkKind::Cut:
      return "cut";
    case LinkKind::Weak:
      return "weak";
    case LinkKind::Contr:
      return "contr";
    case LinkKind::Tensor:
      return "tensor";
    case LinkKind::Par:
      return "par";
    case LinkKind::Der:
      return "der";
    case LinkKind::Box:
      return "bang";
  }
  return "?";
}

std::string render_label(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Var:
      return l.id;
    case Label::Kind::Name:
      return "'" + l.id;
    case Label::Kind::Dist:
      return "*";
    case Label::Kind::StackOut:
      return "out";
    case Label::Kind::Aux:
      return "";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Net editing primitives.

namespace {

int add_wire(Net& n, Formula f) {
  n.wires.push_back(std::move(f));
  return static_cast<int>(n.wires.size()) - 1;
}

int add_link(Net& n, LinkKind k, std::vector<int> in, std::vector<int> out,
             std::shared_ptr<const Net> inner = nullptr) {
  n.links.push_back(Link{k, std::move(in), std::move(out), std::move(inner)});
  return static_cast<int>(n.links.size()) - 1;
}

// Appends src into dst; returns the wire offset.
int append(Net& dst, const Net& src) {
  int off = static_cast<int>(dst.wires.size());
  dst.wires.insert(dst.wires.end(), src.wires.begin(), src.wires.end());
  for (const Link& l : src.links) {
    Link c = l;
    for (int& w : c.in) w += off;
    for (int& w : c.out) w += off;
    dst.links.push_back(std::move(c));
  }
  for (const Conclusion& c : src.concl) dst.concl.push_back(Conclusion{c.wire + off, c.label});
  return off;
}

int take(Net& n, const Label& l) {
  for (std::size_t i = 0; i < n.concl.size(); ++i)
    if (n.concl[i].label == l) {
      int w = n.concl[i].wire;
      n.concl.erase(n.concl.begin() + static_cast<long>(i));
      return w;
    }
  return -1;
}

Label var_label(const std::string& x) { return Label{Label::Kind::Var, x}; }
Label name_label(const std::string& a) { return Label{Label::Kind::Name, a}; }
Label dist_label() { return Label{Label::Kind::Dist, ""}; }
Label out_label() { return Label{Label::Kind::StackOut, ""}; }

int weak(Net& n, Formula f) {
  int w = add_wire(n, std::move(f));
  add_link(n, LinkKind::Weak, {}, {w});
  return w;
}

// Contracts conclusions sharing a variable or name label.
void contract_shared(Net& n) {
  std::vector<Conclusion> out;
  std::map<Label, std::vector<int>> groups;
  std::vector<Label> order;
  for (auto& c : n.concl) {
    if (c.label.kind != Label::Kind::Var && c.label.kind != Label::Kind::Name) {
      out.push_back(c);
      continue;
    }
    auto& g = groups[c.label];
    if (g.empty()) order.push_back(c.label);
    g.push_back(c.wire);
  }
  for (auto& l : order) {
    auto& g = groups[l];
    if (g.size() == 1) {
      out.push_back(Conclusion{g[0], l});
      continue;
    }
    int w = add_wire(n, n.wires[g[0]]);
    add_link(n, LinkKind::Contr, g, {w});
    out.push_back(Conclusion{w, l});
  }
  n.concl = std::move(out);
}

// Boxes a term net. Wire 0 of the result is the principal door, which is not
// listed among the conclusions.
Net box_of(Net inner) {
  auto it = std::find_if(inner.concl.begin(), inner.concl.end(),
                         [](const Conclusion& c) { return c.label.kind == Label::Kind::Dist; });
  if (it == inner.concl.end()) throw InvalidDerivation("box: missing output");
  Conclusion d = *it;
  inner.concl.erase(it);
  inner.concl.insert(inner.concl.begin(), d);
  Net outer;
  std::vector<int> outs;
  outs.push_back(add_wire(outer, f_bang(inner.wires[d.wire])));
  for (std::size_t i = 1; i < inner.concl.size(); ++i) {
    int w = add_wire(outer, inner.wires[inner.concl[i].wire]);
    outs.push_back(w);
    outer.concl.push_back(Conclusion{w, inner.concl[i].label});
  }
  add_link(outer, LinkKind::Box, {}, outs, std::make_shared<const Net>(std::move(inner)));
  return outer;
}

Formula type_formula(const Judgment& j) {
  if (!j.type) throw InvalidDerivation("expected a term judgment");
  return formula_of_type(*j.type);
}

Net tr(const Derivation& d);

Net stack_tr(const Derivation& d, const Type& b) {
  if (d.rule == TypingRule::Stk) {
    if (d.premises.size() != 2) throw InvalidDerivation("stk: premises");
    Net net = stack_tr(d.premises[1], b);
    int rest = take(net, dist_label());
    int off = append(net, box_of(tr(d.premises[0])));
    int p = off;
    int t = add_wire(net, f_tensor(net.wires[p], net.wires[rest]));
    add_link(net, LinkKind::Tensor, {p, rest}, {t});
    net.concl.push_back(Conclusion{t, dist_label()});
    contract_shared(net);
    return net;
  }
  Net net = box_of(tr(d));
  int p = 0;
  Formula fb = formula_of_type(b);
  int o = add_wire(net, fb);
  int q = add_wire(net, negate(fb));
  add_link(net, LinkKind::Ax, {}, {o, q});
  int t = add_wire(net, f_tensor(net.wires[p], net.wires[q]));
  add_link(net, LinkKind::Tensor, {p, q}, {t});
  net.concl.push_back(Conclusion{t, dist_label()});
  net.concl.push_back(Conclusion{o, out_label()});
  return net;
}

Net tr(const Derivation& d) {
  const Judgment& j = d.conclusion;
  const Node& n = *j.subject;
  auto need = [&](std::size_t k) {
    if (d.premises.size() != k) throw InvalidDerivation(std::string(typing_rule_name(d.rule)) + ": premises");
  };
  switch (d.rule) {
    case TypingRule::Var: {
      Net net;
      Formula f = type_formula(j);
      int o = add_wire(net, f);
      int q = add_wire(net, negate(f));
      add_link(net, LinkKind::Ax, {}, {o, q});
      int w = add_wire(net, f_why(negate(f)));
      add_link(net, LinkKind::Der, {q}, {w});
      net.concl.push_back(Conclusion{w, var_label(n.id)});
      net.concl.push_back(Conclusion{o, dist_label()});
      return net;
    }
    case TypingRule::App: {
      need(2);
      Net net = tr(d.premises[0]);
      int fd = take(net, dist_label());
      int p = append(net, box_of(tr(d.premises[1])));
      Formula fb = type_formula(j);
      int o = add_wire(net, fb);
      int q = add_wire(net, negate(fb));
      add_link(net, LinkKind::Ax, {}, {o, q});
      int t = add_wire(net, f_tensor(net.wires[p], net.wires[q]));
      add_link(net, LinkKind::Tensor, {p, q}, {t});
      add_link(net, LinkKind::Cut, {t, fd}, {});
      net.concl.push_back(Conclusion{o, dist_label()});
      contract_shared(net);
      return net;
    }
    case TypingRule::Abs: {
      need(1);
      Net net = tr(d.premises[0]);
      int body = take(net, dist_label());
      int x = take(net, var_label(n.id));
      if (x < 0) x = weak(net, f_why(negate(formula_of_type((*j.type)->dom))));
      int p = add_wire(net, f_par(net.wires[x], net.wires[body]));
      add_link(net, LinkKind::Par, {x, body}, {p});
      net.concl.push_back(Conclusion{p, dist_label()});
      return net;
    }
    case TypingRule::Cont: {
      need(1);
      Net net = tr(d.premises[0]);
      int a = take(net, name_label(n.id));
      if (a < 0) a = weak(net, type_formula(j));
      net.concl.push_back(Conclusion{a, dist_label()});
      return net;
    }
    case TypingRule::Name: {
      need(1);
      Net net = tr(d.premises[0]);
      for (auto& c : net.concl)
        if (c.label.kind == Label::Kind::Dist) c.label = name_label(n.id);
      contract_shared(net);
      return net;
    }
    case TypingRule::Subs: {
      need(2);
      Net net = tr(d.premises[0]);
      int x = take(net, var_label(n.id));
      if (x < 0) x = weak(net, f_why(negate(type_formula(d.premises[1].conclusion))));
      int p = append(net, box_of(tr(d.premises[1])));
      add_link(net, LinkKind::Cut, {p, x}, {});
      contract_shared(net);
      return net;
    }
    case TypingRule::Repl: {
      need(2);
      auto ob = j.delta.find(n.id2);
      if (ob == j.delta.end()) throw InvalidDerivation("repl: output name untyped");
      Net net = tr(d.premises[0]);
      int a = take(net, name_label(n.id));
      Net s = stack_tr(d.premises[1], ob->second);
      int anti = take(s, dist_label());
      int out = take(s, out_label());
      int off = append(net, s);
      anti += off;
      out += off;
      if (a < 0) a = weak(net, negate(net.wires[anti]));
      add_link(net, LinkKind::Cut, {anti, a}, {});
      net.concl.push_back(Conclusion{out, name_label(n.id2)});
      contract_shared(net);
      return net;
    }
    case TypingRule::Ren: {
      need(1);
      auto ob = j.delta.find(n.id2);
      if (ob == j.delta.end()) throw InvalidDerivation("ren: target untyped");
      Net net = tr(d.premises[0]);
      int a = take(net, name_label(n.id));
      if (a < 0) a = weak(net, formula_of_type(ob->second));
      net.concl.push_back(Conclusion{a, name_label(n.id2)});
      contract_shared(net);
      return net;
    }
    case TypingRule::Stk:
      throw InvalidDerivation("stack judgment outside a replacement");
  }
  throw InvalidDerivation("unknown rule");
}

void type_atoms(const Type& t, std::set<std::string>& out) {
  if (t->tag == TypeNode::Tag::Base) out.insert(t->base);
  if (t->tag == TypeNode::Tag::Arrow) {
    type_atoms(t->dom, out);
    type_atoms(t->cod, out);
  }
}

void derivation_atoms(const Derivation& d, std::set<std::string>& out) {
  const Judgment& j = d.conclusion;
  if (j.type) type_atoms(*j.type, out);
  for (auto& t : j.stack_type) type_atoms(t, out);
  for (auto& [k, t] : j.gamma) type_atoms(t, out);
  for (auto& [k, t] : j.delta) type_atoms(t, out);
  for (auto& p : d.premises) derivation_atoms(p, out);
}

}  // namespace

Net translate(const Derivation& d) {
  CheckResult cr = check(d);
  if (!cr.ok) throw InvalidDerivation("translate: " + cr.message);
  if (d.conclusion.subject->kind == Kind::Stack) {
    std::set<std::string> atoms;
    derivation_atoms(d, atoms);
    std::string b = "O";
    for (int k = 1; atoms.count(b); ++k) b = "O" + std::to_string(k);
    return stack_tr(d, base_type(b));
  }
  return tr(d);
}

Net translate_object(const Object& o) {
  auto t = try_infer(o);
  if (!t) throw Untypable("translate: object is not typable");
  return translate(t->derivation);
}

// ---------------------------------------------------------------------------
// Rules.

const char* ppn_rule_name(PpnRule r) {
  switch (r) {
    case PpnRule::Ax:
      return "C(ax)";
    case PpnRule::TensorPar:
      return "C(⊗,⅋)";
    case PpnRule::BangWeak:
      return "C(!,w)";
    case PpnRule::BangDer:
      return "C(!,d)";
    case PpnRule::BangContr:
      return "C(!,c)";
    case PpnRule::BangBox:
      return "C(!,!)";
    case PpnRule::TensorWeak:
      return "C(⊗,w)";
    case PpnRule::TensorContr:
      return "C(⊗,c)";
    case PpnRule::TensorBox:
      return "C(⊗,!)";
  }
  return "?";
}

std::optional<PpnRule> ppn_rule_from_name(const std::string& s) {
  static const std::map<std::string, PpnRule> ascii{
      {"ax", PpnRule::Ax},          {"tp", PpnRule::TensorPar},   {"!w", PpnRule::BangWeak},
      {"!d", PpnRule::BangDer},     {"!c", PpnRule::BangContr},   {"!!", PpnRule::BangBox},
      {"tw", PpnRule::TensorWeak},  {"tc", PpnRule::TensorContr}, {"t!", PpnRule::TensorBox}};
  for (PpnRule r : all_ppn_rules())
    if (s == ppn_rule_name(r)) return r;
  auto it = ascii.find(s);
  if (it != ascii.end()) return it->second;
  return std::nullopt;
}

const PpnRuleSet& all_ppn_rules() {
  static const PpnRuleSet s{PpnRule::Ax,        PpnRule::TensorPar, PpnRule::BangWeak,
                            PpnRule::BangDer,   PpnRule::BangContr, PpnRule::BangBox,
                            PpnRule::TensorWeak, PpnRule::TensorContr, PpnRule::TensorBox};
  return s;
}

const PpnRuleSet& multiplicative_rules() {
  static const PpnRuleSet s{PpnRule::Ax, PpnRule::TensorPar};
  return s;
}

namespace {

struct End {
  int link = -1;  // -1: conclusion
  int port = -1;
};

struct Index {
  std::vector<End> prod;
  std::vector<End> cons;
  explicit Index(const Net& n) : prod(n.wires.size()), cons(n.wires.size()) {
    for (std::size_t l = 0; l < n.links.size(); ++l) {
      const Link& k = n.links[l];
      for (std::size_t p = 0; p < k.out.size(); ++p) prod[k.out[p]] = End{static_cast<int>(l), static_cast<int>(p)};
      for (std::size_t p = 0; p < k.in.size(); ++p) cons[k.in[p]] = End{static_cast<int>(l), static_cast<int>(p)};
    }
    for (std::size_t c = 0; c < n.concl.size(); ++c) cons[n.concl[c].wire] = End{-1, static_cast<int>(c)};
  }
};

// Mutable working copy with deferred deletion.
struct Editor {
  Net net;
  std::vector<bool> dead;

  explicit Editor(Net n) : net(std::move(n)), dead(net.links.size(), false) {}

  int wire(Formula f) { return add_wire(net, std::move(f)); }
  int link(LinkKind k, std::vector<int> in, std::vector<int> out, std::shared_ptr<const Net> inner = nullptr) {
    dead.push_back(false);
    return add_link(net, k, std::move(in), std::move(out), std::move(inner));
  }
  void kill(int l) { dead[l] = true; }

  // The consumer of `old` now consumes `neu`.
  void redirect(int old, int neu) {
    for (std::size_t l = 0; l < net.links.size(); ++l) {
      if (dead[l]) continue;
      for (int& w : net.links[l].in)
        if (w == old) {
          w = neu;
          return;
        }
    }
    for (auto& c : net.concl)
      if (c.wire == old) {
        c.wire = neu;
        return;
      }
  }

  Net finish() {
    Net out;
    std::vector<int> remap(net.wires.size(), -1);
    auto map = [&](int w) {
      if (remap[w] < 0) remap[w] = add_wire(out, net.wires[w]);
      return remap[w];
    };
    for (std::size_t l = 0; l < net.links.size(); ++l) {
      if (dead[l]) continue;
      Link k = net.links[l];
      for (int& w : k.out) w = map(w);
      for (int& w : k.in) w = map(w);
      out.links.push_back(std::move(k));
    }
    for (auto c : net.concl) {
      c.wire = map(c.wire);
      out.concl.push_back(c);
    }
    return out;
  }
};

struct Component {
  std::vector<int> links;
  std::vector<int> internal;  // produced and consumed inside, root first
  std::vector<int> free;      // produced inside, consumed outside
  bool ok = true;
};

void collect_component(const Net& n, const Index& ix, int w, Component& c) {
  End p = ix.prod[w];
  if (p.link < 0) {
    c.ok = false;
    return;
  }
  const Link& l = n.links[p.link];
  c.links.push_back(p.link);
  c.internal.push_back(w);
  switch (l.kind) {
    case LinkKind::Box:
      if (p.port != 0) c.ok = false;
      for (std::size_t i = 1; i < l.out.size(); ++i) c.free.push_back(l.out[i]);
      return;
    case LinkKind::Ax:
      c.free.push_back(l.out[1 - p.port]);
      return;
    case LinkKind::Tensor:
      collect_component(n, ix, l.in[0], c);
      collect_component(n, ix, l.in[1], c);
      return;
    default:
      c.ok = false;
  }
}

// Copies the component into `dst`; returns (root, free copies).
std::pair<int, std::vector<int>> copy_component(const Net& src, const Component& c, Net& dst,
                                               std::vector<bool>* dead) {
  std::unordered_map<int, int> m;
  for (int w : c.internal) m[w] = add_wire(dst, src.wires[w]);
  std::vector<int> fr;
  for (int w : c.free) {
    m[w] = add_wire(dst, src.wires[w]);
    fr.push_back(m[w]);
  }
  for (int l : c.links) {
    Link k = src.links[l];
    for (int& w : k.in) w = m.at(w);
    for (int& w : k.out) w = m.at(w);
    dst.links.push_back(std::move(k));
    if (dead) dead->push_back(false);
  }
  return {m.at(c.internal[0]), fr};
}

struct Redex {
  PpnRule rule;
  int cut;
};

std::optional<PpnRule> classify_cut(const Net& n, const Index& ix, int cut) {
  const Link& c = n.links[cut];
  int w0 = c.in[0], w1 = c.in[1];
  End p0 = ix.prod[w0], p1 = ix.prod[w1];
  if (p0.link < 0 || p1.link < 0) return std::nullopt;
  if (n.links[p0.link].kind == LinkKind::Ax || n.links[p1.link].kind == LinkKind::Ax) return PpnRule::Ax;
  int pos = is_negative(n.wires[w0]) ? w1 : w0;
  int neg = pos == w0 ? w1 : w0;
  LinkKind pk = n.links[ix.prod[pos].link].kind;
  LinkKind nk = n.links[ix.prod[neg].link].kind;
  if (pk == LinkKind::Tensor && nk == LinkKind::Par) return PpnRule::TensorPar;
  if (pk == LinkKind::Box) {
    switch (nk) {
      case LinkKind::Weak:
        return PpnRule::BangWeak;
      case LinkKind::Der:
        return PpnRule::BangDer;
      case LinkKind::Contr:
        return PpnRule::BangContr;
      case LinkKind::Box:
        return PpnRule::BangBox;
      default:
        return std::nullopt;
    }
  }
  if (pk == LinkKind::Tensor) {
    switch (nk) {
      case LinkKind::Weak:
        return PpnRule::TensorWeak;
      case LinkKind::Contr:
        return PpnRule::TensorContr;
      case LinkKind::Box:
        return PpnRule::TensorBox;
      default:
        return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<Net> apply_at(const Net& n, int cut, PpnRule rule) {
  Index ix(n);
  Editor e(n);
  const Link c = n.links[cut];
  e.kill(cut);
  if (rule == PpnRule::Ax) {
    int side = n.links[ix.prod[c.in[0]].link].kind == LinkKind::Ax ? 0 : 1;
    int wa = c.in[side], wx = c.in[1 - side];
    End pa = ix.prod[wa];
    int other = n.links[pa.link].out[1 - pa.port];
    if (other == wx) return std::nullopt;
    e.kill(pa.link);
    e.redirect(other, wx);
    return e.finish();
  }
  int pos = is_negative(n.wires[c.in[0]]) ? c.in[1] : c.in[0];
  int neg = pos == c.in[0] ? c.in[1] : c.in[0];
  End pp = ix.prod[pos];
  End np = ix.prod[neg];
  const Link pl = n.links[pp.link];
  const Link nl = n.links[np.link];
  if (rule == PpnRule::TensorPar) {
    e.kill(pp.link);
    e.kill(np.link);
    e.link(LinkKind::Cut, {pl.in[0], nl.in[0]}, {});
    e.link(LinkKind::Cut, {pl.in[1], nl.in[1]}, {});
    return e.finish();
  }
  if (rule == PpnRule::BangDer) {
    const Net& inner = *pl.inner;
    e.kill(pp.link);
    e.kill(np.link);
    int off = append(e.net, Net{inner.wires, inner.links, {}});
    e.dead.resize(e.net.links.size(), false);
    e.link(LinkKind::Cut, {inner.concl[0].wire + off, nl.in[0]}, {});
    for (std::size_t i = 1; i < pl.out.size(); ++i) e.redirect(pl.out[i], inner.concl[i].wire + off);
    return e.finish();
  }
  Component comp;
  collect_component(n, ix, pos, comp);
  if (!comp.ok) return std::nullopt;
  if (std::find(comp.links.begin(), comp.links.end(), np.link) != comp.links.end()) return std::nullopt;
  for (int l : comp.links) e.kill(l);
  switch (rule) {
    case PpnRule::BangWeak:
    case PpnRule::TensorWeak:
      e.kill(np.link);
      for (int f : comp.free) e.link(LinkKind::Weak, {}, {f});
      return e.finish();
    case PpnRule::BangContr:
    case PpnRule::TensorContr: {
      e.kill(np.link);
      std::vector<std::vector<int>> copies(comp.free.size());
      for (int k : nl.in) {
        auto [root, fr] = copy_component(n, comp, e.net, &e.dead);
        e.link(LinkKind::Cut, {root, k}, {});
        for (std::size_t j = 0; j < fr.size(); ++j) copies[j].push_back(fr[j]);
      }
      for (std::size_t j = 0; j < comp.free.size(); ++j) {
        if (copies[j].empty())
          e.link(LinkKind::Weak, {}, {comp.free[j]});
        else
          e.link(LinkKind::Contr, copies[j], {comp.free[j]});
      }
      return e.finish();
    }
    case PpnRule::BangBox:
    case PpnRule::TensorBox: {
      Net inner = *nl.inner;
      int port = np.port;
      auto [root, fr] = copy_component(n, comp, inner, nullptr);
      add_link(inner, LinkKind::Cut, {root, inner.concl[port].wire}, {});
      inner.concl.erase(inner.concl.begin() + port);
      for (int f : fr) inner.concl.push_back(Conclusion{f, Label{}});
      Link& box = e.net.links[np.link];
      box.out.erase(box.out.begin() + port);
      for (int f : comp.free) box.out.push_back(f);
      box.inner = std::make_shared<const Net>(std::move(inner));
      return e.finish();
    }
    default:
      return std::nullopt;
  }
}

void steps_into(const Net& n, const PpnRuleSet& rules, std::vector<std::pair<PpnRule, Net>>& out) {
  Index ix(n);
  for (std::size_t l = 0; l < n.links.size(); ++l) {
    if (n.links[l].kind != LinkKind::Cut) continue;
    auto r = classify_cut(n, ix, static_cast<int>(l));
    if (!r || !rules.count(*r)) continue;
    if (auto m = apply_at(n, static_cast<int>(l), *r)) out.emplace_back(*r, std::move(*m));
  }
  for (std::size_t l = 0; l < n.links.size(); ++l) {
    if (n.links[l].kind != LinkKind::Box) continue;
    std::vector<std::pair<PpnRule, Net>> inner;
    steps_into(*n.links[l].inner, rules, inner);
    for (auto& [r, m] : inner) {
      Net c = n;
      c.links[l].inner = std::make_shared<const Net>(std::move(m));
      out.emplace_back(r, std::move(c));
    }
  }
}

}  // namespace

std::vector<std::pair<PpnRule, Net>> ppn_steps(const Net& n, const PpnRuleSet& rules) {
  std::vector<std::pair<PpnRule, Net>> out;
  steps_into(n, rules, out);
  return out;
}

Net mult_normal_form(const Net& n, std::vector<PpnRule>* trace) {
  Net cur = n;
  for (auto& l : cur.links)
    if (l.kind == LinkKind::Box) l.inner = std::make_shared<const Net>(mult_normal_form(*l.inner, trace));
  for (;;) {
    Index ix(cur);
    bool done = true;
    for (std::size_t l = 0; l < cur.links.size(); ++l) {
      if (cur.links[l].kind != LinkKind::Cut) continue;
      auto r = classify_cut(cur, ix, static_cast<int>(l));
      if (!r || !multiplicative_rules().count(*r)) continue;
      if (auto m = apply_at(cur, static_cast<int>(l), *r)) {
        if (trace) trace->push_back(*r);
        cur = std::move(*m);
        done = false;
        break;
      }
    }
    if (done) return cur;
  }
}

std::size_t net_size(const Net& n) {
  std::size_t s = 0;
  for (auto& l : n.links) {
    ++s;
    if (l.kind == LinkKind::Box) s += net_size(*l.inner);
  }
  return s;
}

std::size_t cut_count(const Net& n, const PpnRuleSet& rules) {
  Index ix(n);
  std::size_t k = 0;
  for (std::size_t l = 0; l < n.links.size(); ++l) {
    if (n.links[l].kind == LinkKind::Cut) {
      auto r = classify_cut(n, ix, static_cast<int>(l));
      if (r && rules.count(*r)) ++k;
    }
    if (n.links[l].kind == LinkKind::Box) k += cut_count(*n.links[l].inner, rules);
  }
  return k;
}

bool well_formed(const Net& n, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<int> produced(n.wires.size(), 0), consumed(n.wires.size(), 0);
  for (auto& l : n.links) {
    for (int w : l.out) {
      if (w < 0 || static_cast<std::size_t>(w) >= n.wires.size()) return fail("wire out of range");
      ++produced[w];
    }
    for (int w : l.in) {
      if (w < 0 || static_cast<std::size_t>(w) >= n.wires.size()) return fail("wire out of range");
      ++consumed[w];
    }
  }
  for (auto& c : n.concl) ++consumed[c.wire];
  for (std::size_t w = 0; w < n.wires.size(); ++w)
    if (produced[w] != 1 || consumed[w] != 1) return fail("wire " + std::to_string(w) + " is not a single edge");
  auto F = [&](int w) { return n.wires[w]; };
  for (auto& l : n.links) {
    auto arity = [&](std::size_t i, std::size_t o) { return l.in.size() == i && l.out.size() == o; };
    switch (l.kind) {
      case LinkKind::Ax:
        if (!arity(0, 2) || !formula_equal(F(l.out[1]), negate(F(l.out[0])))) return fail("ax");
        break;
      case LinkKind::Cut:
        if (!arity(2, 0) || !formula_equal(F(l.in[1]), negate(F(l.in[0])))) return fail("cut");
        break;
      case LinkKind::Weak:
        if (!arity(0, 1) || !is_negative(F(l.out[0]))) return fail("weak");
        break;
      case LinkKind::Contr:
        if (l.out.size() != 1 || !is_negative(F(l.out[0]))) return fail("contr");
        for (int w : l.in)
          if (!formula_equal(F(w), F(l.out[0]))) return fail("contr premise");
        break;
      case LinkKind::Tensor:
        if (!arity(2, 1) || !formula_equal(F(l.out[0]), f_tensor(F(l.in[0]), F(l.in[1])))) return fail("tensor");
        break;
      case LinkKind::Par:
        if (!arity(2, 1) || !formula_equal(F(l.out[0]), f_par(F(l.in[0]), F(l.in[1])))) return fail("par");
        break;
      case LinkKind::Der:
        if (!arity(1, 1) || !formula_equal(F(l.out[0]), f_why(F(l.in[0])))) return fail("der");
        break;
      case LinkKind::Box: {
        const Net& in = *l.inner;
        if (!l.in.empty() || l.out.size() != in.concl.size() || l.out.empty()) return fail("box arity");
        if (!formula_equal(F(l.out[0]), f_bang(in.wires[in.concl[0].wire]))) return fail("box principal");
        for (std::size_t i = 1; i < l.out.size(); ++i)
          if (!formula_equal(F(l.out[i]), in.wires[in.concl[i].wire]) || !is_negative(F(l.out[i])))
            return fail("box auxiliary door");
        if (!well_formed(in, why)) return false;
        break;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural equivalence.

namespace {

bool is_top_droppable(const Label& l) { return l.kind == Label::Kind::Var || l.kind == Label::Kind::Name; }

Net canon_level(const Net& n, bool top) {
  Net cur = n;
  for (auto& l : cur.links)
    if (l.kind == LinkKind::Box) l.inner = std::make_shared<const Net>(canon_level(*l.inner, false));
  for (bool changed = true; changed;) {
    changed = false;
    Index ix(cur);
    Editor e(cur);
    // Pull weakenings and contractions out through auxiliary doors.
    for (std::size_t b = 0; b < cur.links.size() && !changed; ++b) {
      if (cur.links[b].kind != LinkKind::Box) continue;
      const Net& in = *cur.links[b].inner;
      Index iix(in);
      for (std::size_t j = 1; j < in.concl.size(); ++j) {
        End p = iix.prod[in.concl[j].wire];
        LinkKind k = in.links[p.link].kind;
        if (k != LinkKind::Weak && k != LinkKind::Contr) continue;
        Editor ie(in);
        ie.kill(p.link);
        std::vector<int> prem = in.links[p.link].in;
        ie.net.concl.erase(ie.net.concl.begin() + static_cast<long>(j));
        for (int w : prem) ie.net.concl.push_back(Conclusion{w, Label{}});
        Link& box = e.net.links[b];
        int o = box.out[j];
        box.out.erase(box.out.begin() + static_cast<long>(j));
        std::vector<int> outs;
        for (std::size_t i = 0; i < prem.size(); ++i) {
          int w = e.wire(cur.wires[o]);
          e.net.links[b].out.push_back(w);
          outs.push_back(w);
        }
        e.net.links[b].inner = std::make_shared<const Net>(ie.finish());
        if (outs.empty())
          e.link(LinkKind::Weak, {}, {o});
        else
          e.link(LinkKind::Contr, outs, {o});
        changed = true;
        break;
      }
    }
    if (changed) {
      cur = e.finish();
      continue;
    }
    // Flatten contraction trees and absorb weakenings.
    for (std::size_t l = 0; l < cur.links.size() && !changed; ++l) {
      if (cur.links[l].kind != LinkKind::Contr) continue;
      const Link& k = cur.links[l];
      std::vector<int> prem;
      for (int w : k.in) {
        End p = ix.prod[w];
        const Link& pl = cur.links[p.link];
        if (pl.kind == LinkKind::Contr) {
          e.kill(p.link);
          prem.insert(prem.end(), pl.in.begin(), pl.in.end());
          changed = true;
        } else if (pl.kind == LinkKind::Weak) {
          e.kill(p.link);
          changed = true;
        } else {
          prem.push_back(w);
        }
      }
      if (prem.size() <= 1) changed = true;
      if (!changed) continue;
      if (prem.empty()) {
        e.net.links[l] = Link{LinkKind::Weak, {}, k.out, nullptr};
      } else if (prem.size() == 1) {
        e.kill(static_cast<int>(l));
        e.redirect(k.out[0], prem[0]);
      } else {
        e.net.links[l].in = prem;
      }
    }
    if (changed) {
      cur = e.finish();
      continue;
    }
    if (top) {
      for (std::size_t c = 0; c < cur.concl.size(); ++c) {
        if (!is_top_droppable(cur.concl[c].label)) continue;
        End p = ix.prod[cur.concl[c].wire];
        if (cur.links[p.link].kind != LinkKind::Weak) continue;
        e.kill(p.link);
        e.net.concl.erase(e.net.concl.begin() + static_cast<long>(c));
        changed = true;
        break;
      }
      if (changed) cur = e.finish();
    }
  }
  return cur;
}

// Flattened view of a net with boxes inlined, for isomorphism search.
struct Flat {
  struct FLink {
    LinkKind kind;
    std::vector<std::vector<int>> ports;  // wires per port
    bool unordered_from_1 = false;        // box auxiliary doors
    int unordered_upto = 0;               // contraction premises [0, k)
    std::uint64_t color = 0;
  };
  struct FEnd {
    int link = -1;
    int port = -1;
    int offset = 0;
  };
  std::vector<Formula> wires;
  std::vector<FEnd> prod, cons;
  std::vector<FLink> links;
  std::vector<std::pair<Label, int>> concl;
  std::vector<std::uint64_t> wcolor;

  bool unordered(const FLink& l, int port) const {
    if (l.kind == LinkKind::Box) return port >= 1;
    if (l.kind == LinkKind::Contr) return port < l.unordered_upto;
    return false;
  }
};

void flatten_into(const Net& n, Flat& f, const std::vector<int>& concl_wires, int box_link) {
  std::vector<int> gw(n.wires.size());
  for (std::size_t w = 0; w < n.wires.size(); ++w) {
    gw[w] = static_cast<int>(f.wires.size());
    f.wires.push_back(n.wires[w]);
    f.prod.emplace_back();
    f.cons.emplace_back();
  }
  (void)concl_wires;
  for (std::size_t c = 0; c < n.concl.size(); ++c) {
    int w = gw[n.concl[c].wire];
    if (box_link < 0) {
      f.cons[w] = Flat::FEnd{-1, static_cast<int>(f.concl.size()), 0};
      f.concl.emplace_back(n.concl[c].label, w);
    } else {
      f.links[box_link].ports[c].push_back(w);
      f.cons[w] = Flat::FEnd{box_link, static_cast<int>(c), 1};
    }
  }
  for (const Link& l : n.links) {
    int id = static_cast<int>(f.links.size());
    Flat::FLink fl;
    fl.kind = l.kind;
    auto set_prod = [&](int w, int port, int off) { f.prod[w] = Flat::FEnd{id, port, off}; };
    auto set_cons = [&](int w, int port, int off) { f.cons[w] = Flat::FEnd{id, port, off}; };
    switch (l.kind) {
      case LinkKind::Ax: {
        int a = gw[l.out[0]], b = gw[l.out[1]];
        if (!is_negative(f.wires[a])) std::swap(a, b);
        fl.ports = {{a}, {b}};
        f.links.push_back(fl);
        set_prod(a, 0, 0);
        set_prod(b, 1, 0);
        break;
      }
      case LinkKind::Cut: {
        int a = gw[l.in[0]], b = gw[l.in[1]];
        if (is_negative(f.wires[a])) std::swap(a, b);
        fl.ports = {{a}, {b}};
        f.links.push_back(fl);
        set_cons(a, 0, 0);
        set_cons(b, 1, 0);
        break;
      }
      case LinkKind::Weak:
        fl.ports = {{gw[l.out[0]]}};
        f.links.push_back(fl);
        set_prod(gw[l.out[0]], 0, 0);
        break;
      case LinkKind::Contr: {
        for (int w : l.in) fl.ports.push_back({gw[w]});
        fl.ports.push_back({gw[l.out[0]]});
        fl.unordered_upto = static_cast<int>(l.in.size());
        f.links.push_back(fl);
        for (std::size_t i = 0; i < l.in.size(); ++i) set_cons(gw[l.in[i]], static_cast<int>(i), 0);
        set_prod(gw[l.out[0]], static_cast<int>(l.in.size()), 0);
        break;
      }
      case LinkKind::Tensor:
      case LinkKind::Par:
      case LinkKind::Der: {
        for (int w : l.in) fl.ports.push_back({gw[w]});
        fl.ports.push_back({gw[l.out[0]]});
        f.links.push_back(fl);
        for (std::size_t i = 0; i < l.in.size(); ++i) set_cons(gw[l.in[i]], static_cast<int>(i), 0);
        set_prod(gw[l.out[0]], static_cast<int>(l.in.size()), 0);
        break;
      }
      case LinkKind::Box: {
        for (int w : l.out) fl.ports.push_back({gw[w]});
        fl.unordered_from_1 = true;
        f.links.push_back(fl);
        for (std::size_t i = 0; i < l.out.size(); ++i) set_prod(gw[l.out[i]], static_cast<int>(i), 0);
        flatten_into(*l.inner, f, {}, id);
        break;
      }
    }
  }
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t shape_hash(const Formula& f) {
  std::uint64_t h = static_cast<std::uint64_t>(f->tag) + 1;
  if (f->left) h = mix(h, shape_hash(f->left));
  if (f->right) h = mix(h, shape_hash(f->right));
  return h;
}

std::uint64_t label_hash(const Label& l) {
  return mix(static_cast<std::uint64_t>(l.kind) + 101, std::hash<std::string>{}(l.id));
}

// Without shapes, colours ignore formulas (used when matching up to instantiation).
Flat flatten(const Net& n, bool shapes = true) {
  Flat f;
  flatten_into(n, f, {}, -1);
  f.wcolor.resize(f.wires.size());
  for (std::size_t w = 0; w < f.wires.size(); ++w) f.wcolor[w] = shapes ? shape_hash(f.wires[w]) : 1;
  for (auto& l : f.links) l.color = mix(static_cast<std::uint64_t>(l.kind) + 7, l.ports.size());
  auto end_hash = [&](const Flat::FEnd& e) -> std::uint64_t {
    if (e.link < 0) return label_hash(f.concl[e.port].first);
    const auto& l = f.links[e.link];
    std::uint64_t slot = f.unordered(l, e.port) ? 1000003 : static_cast<std::uint64_t>(e.port);
    return mix(mix(l.color, slot), static_cast<std::uint64_t>(e.offset));
  };
  for (int round = 0; round < 4; ++round) {
    std::vector<std::uint64_t> lc(f.links.size());
    for (std::size_t i = 0; i < f.links.size(); ++i) {
      const auto& l = f.links[i];
      std::uint64_t h = l.color;
      std::vector<std::uint64_t> un;
      for (std::size_t p = 0; p < l.ports.size(); ++p) {
        std::uint64_t ph = 17;
        for (int w : l.ports[p]) ph = mix(ph, f.wcolor[w]);
        if (f.unordered(l, static_cast<int>(p)))
          un.push_back(ph);
        else
          h = mix(h, mix(p, ph));
      }
      std::sort(un.begin(), un.end());
      for (auto u : un) h = mix(h, u);
      lc[i] = h;
    }
    for (std::size_t i = 0; i < f.links.size(); ++i) f.links[i].color = lc[i];
    std::vector<std::uint64_t> wc(f.wires.size());
    for (std::size_t w = 0; w < f.wires.size(); ++w)
      wc[w] = mix(mix(f.wcolor[w], end_hash(f.prod[w])), end_hash(f.cons[w]));
    f.wcolor = std::move(wc);
  }
  return f;
}

struct Matcher {
  const Flat& a;
  const Flat& b;

  struct State {
    std::vector<int> wmap, wrev, lmap, lrev;
    std::vector<std::vector<int>> pmap, prev;
    std::map<std::string, std::string> afwd, abwd;
    std::map<std::string, Formula> inst;
    std::vector<std::pair<int, int>> queue;
  };

  std::size_t budget = 200000;
  // When set, b's atoms may be instantiated by formulas of a instead of
  // being renamed bijectively.
  bool instance = false;

  bool instantiate(const Formula& x, const Formula& y, State& s) {
    if (y->tag == FormulaNode::Tag::Atom || y->tag == FormulaNode::Tag::NegAtom) {
      Formula v = y->tag == FormulaNode::Tag::Atom ? x : negate(x);
      auto [it, fresh] = s.inst.emplace(y->atom, v);
      return fresh || formula_equal(it->second, v);
    }
    if (x->tag != y->tag) return false;
    if (x->left && !instantiate(x->left, y->left, s)) return false;
    if (x->right && !instantiate(x->right, y->right, s)) return false;
    return true;
  }

  bool atoms(const Formula& x, const Formula& y, State& s) {
    if (instance) return instantiate(x, y, s);
    if (x->tag != y->tag) return false;
    if (x->tag == FormulaNode::Tag::Atom || x->tag == FormulaNode::Tag::NegAtom) {
      auto f = s.afwd.find(x->atom);
      auto g = s.abwd.find(y->atom);
      if (f == s.afwd.end() && g == s.abwd.end()) {
        s.afwd[x->atom] = y->atom;
        s.abwd[y->atom] = x->atom;
        return true;
      }
      return f != s.afwd.end() && g != s.abwd.end() && f->second == y->atom && g->second == x->atom;
    }
    if (x->left && !atoms(x->left, y->left, s)) return false;
    if (x->right && !atoms(x->right, y->right, s)) return false;
    return true;
  }

  bool pair_wire(int w1, int w2, State& s) {
    if (s.wmap[w1] == w2) return true;
    if (s.wmap[w1] != -1 || s.wrev[w2] != -1) return false;
    if (a.wcolor[w1] != b.wcolor[w2]) return false;
    if (!atoms(a.wires[w1], b.wires[w2], s)) return false;
    s.wmap[w1] = w2;
    s.wrev[w2] = w1;
    s.queue.emplace_back(w1, w2);
    return true;
  }

  bool pair_port(int l1, int p1, int l2, int p2, State& s) {
    const auto& x = a.links[l1].ports[p1];
    const auto& y = b.links[l2].ports[p2];
    if (x.size() != y.size()) return false;
    s.pmap[l1][p1] = p2;
    s.prev[l2][p2] = p1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!pair_wire(x[i], y[i], s)) return false;
    return true;
  }

  bool pair_link(int l1, int l2, State& s) {
    const auto& x = a.links[l1];
    const auto& y = b.links[l2];
    if (x.kind != y.kind || x.ports.size() != y.ports.size() || x.color != y.color ||
        x.unordered_upto != y.unordered_upto)
      return false;
    if (s.lmap[l1] == l2) return true;
    if (s.lmap[l1] != -1 || s.lrev[l2] != -1) return false;
    s.lmap[l1] = l2;
    s.lrev[l2] = l1;
    s.pmap[l1].assign(x.ports.size(), -1);
    s.prev[l2].assign(y.ports.size(), -1);
    for (std::size_t p = 0; p < x.ports.size(); ++p)
      if (!a.unordered(x, static_cast<int>(p)) && !pair_port(l1, static_cast<int>(p), l2, static_cast<int>(p), s))
        return false;
    return true;
  }

  bool pair_end(const Flat::FEnd& e1, const Flat::FEnd& e2, State& s) {
    if ((e1.link < 0) != (e2.link < 0)) return false;
    if (e1.link < 0) return a.concl[e1.port].first == b.concl[e2.port].first;
    if (e1.offset != e2.offset) return false;
    if (!pair_link(e1.link, e2.link, s)) return false;
    const auto& x = a.links[e1.link];
    bool u1 = a.unordered(x, e1.port);
    bool u2 = b.unordered(b.links[e2.link], e2.port);
    if (u1 != u2) return false;
    if (!u1) return e1.port == e2.port;
    int cur = s.pmap[e1.link][e1.port];
    if (cur == e2.port) return true;
    if (cur != -1 || s.prev[e2.link][e2.port] != -1) return false;
    return pair_port(e1.link, e1.port, e2.link, e2.port, s);
  }

  bool propagate(State& s) {
    while (!s.queue.empty()) {
      auto [w1, w2] = s.queue.back();
      s.queue.pop_back();
      if (!pair_end(a.prod[w1], b.prod[w2], s)) return false;
      if (!pair_end(a.cons[w1], b.cons[w2], s)) return false;
    }
    return true;
  }

  bool search(State s) {
    if (budget == 0) return false;
    --budget;
    if (!propagate(s)) return false;
    // Unresolved unordered doors of matched links.
    for (std::size_t l1 = 0; l1 < a.links.size(); ++l1) {
      int l2 = s.lmap[l1];
      if (l2 < 0) continue;
      const auto& x = a.links[l1];
      for (std::size_t p1 = 0; p1 < x.ports.size(); ++p1) {
        if (!a.unordered(x, static_cast<int>(p1)) || s.pmap[l1][p1] != -1) continue;
        for (std::size_t p2 = 0; p2 < b.links[l2].ports.size(); ++p2) {
          if (!b.unordered(b.links[l2], static_cast<int>(p2)) || s.prev[l2][p2] != -1) continue;
          State t = s;
          if (pair_port(static_cast<int>(l1), static_cast<int>(p1), l2, static_cast<int>(p2), t) && search(t))
            return true;
        }
        return false;
      }
    }
    // Components not reachable from the conclusions.
    for (std::size_t l1 = 0; l1 < a.links.size(); ++l1) {
      if (s.lmap[l1] != -1) continue;
      for (std::size_t l2 = 0; l2 < b.links.size(); ++l2) {
        if (s.lrev[l2] != -1) continue;
        State t = s;
        if (pair_link(static_cast<int>(l1), static_cast<int>(l2), t) && search(t)) return true;
      }
      return false;
    }
    for (std::size_t w = 0; w < a.wires.size(); ++w)
      if (s.wmap[w] < 0) return false;
    return true;
  }

  bool run() {
    if (a.wires.size() != b.wires.size() || a.links.size() != b.links.size() || a.concl.size() != b.concl.size())
      return false;
    auto sorted = [](std::vector<std::uint64_t> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(a.wcolor) != sorted(b.wcolor)) return false;
    State s;
    s.wmap.assign(a.wires.size(), -1);
    s.wrev.assign(b.wires.size(), -1);
    s.lmap.assign(a.links.size(), -1);
    s.lrev.assign(b.links.size(), -1);
    s.pmap.resize(a.links.size());
    s.prev.resize(b.links.size());
    std::map<Label, int> bl;
    for (auto& [l, w] : b.concl) {
      if (bl.count(l)) return false;
      bl[l] = w;
    }
    for (auto& [l, w] : a.concl) {
      auto it = bl.find(l);
      if (it == bl.end()) return false;
      if (!pair_wire(w, it->second, s)) return false;
    }
    return search(std::move(s));
  }
};

std::string flat_signature(const Flat& f) {
  std::vector<std::uint64_t> v = f.wcolor;
  std::sort(v.begin(), v.end());
  std::string s;
  for (auto x : v) s += std::to_string(x) + ",";
  return s;
}

}  // namespace

Net canonicalize(const Net& n) { return canon_level(n, true); }

Net canonical_mnf(const Net& n, std::vector<PpnRule>* trace) {
  Net cur = canonicalize(mult_normal_form(n, trace));
  while (cut_count(cur, multiplicative_rules()) > 0) cur = canonicalize(mult_normal_form(cur, trace));
  return cur;
}

bool ppn_equiv(const Net& x, const Net& y) {
  Flat a = flatten(canonicalize(x));
  Flat b = flatten(canonicalize(y));
  Matcher m{a, b};
  return m.run();
}

// ---------------------------------------------------------------------------
// Simulation.

PpnRuleSet simulation_rules(Rule r) {
  switch (r) {
    case Rule::S:
      return {PpnRule::BangWeak, PpnRule::BangDer, PpnRule::BangContr, PpnRule::BangBox};
    case Rule::Nnl:
    case Rule::Cnl:
    case Rule::Wnl:
    case Rule::Rnl:
      return {PpnRule::TensorWeak, PpnRule::TensorContr, PpnRule::TensorBox};
    default:
      return {};
  }
}

SimReport simulate_check(const Object& o, const Step& step, std::size_t max_states) {
  SimReport rep;
  rep.rule = step.rule;
  auto t = try_infer(o);
  if (!t) throw Untypable("simulate_check: object is not typable");
  auto ta = infer_against(step.after, *t);
  if (!ta) {
    rep.message = "reduct is not typable at the source typing";
    return rep;
  }
  Net start = canonical_mnf(translate(t->derivation), &rep.sequence);
  Net target = canonical_mnf(translate(ta->derivation));
  // The reduct's principal net may be more general than the net of the
  // subject-reduction derivation, so the source only needs to be an instance.
  PpnRuleSet allowed = simulation_rules(step.rule);
  // Garbage in the reduct (a cut against a weakening) cannot be created by
  // reduction, so the reduct side may erase it with the allowed weakening rules.
  PpnRuleSet erase;
  for (PpnRule r : {PpnRule::TensorWeak, PpnRule::BangWeak})
    if (allowed.count(r)) erase.insert(r);
  std::vector<Flat> targets{flatten(target, false)};
  std::vector<Net> pending{target};
  while (!pending.empty() && targets.size() < 64) {
    Net n = pending.back();
    pending.pop_back();
    for (auto& [r, m] : ppn_steps(n, erase)) {
      Net next = canonical_mnf(m);
      pending.push_back(next);
      targets.push_back(flatten(next, false));
    }
  }
  auto hits = [&](const Net& n) {
    Flat f = flatten(n, false);
    for (const Flat& tf : targets) {
      Matcher m{f, tf};
      m.instance = true;
      if (m.run()) return true;
    }
    return false;
  };
  struct Node {
    Net net;
    int parent;
    PpnRule via;
  };
  std::vector<Node> seen{{start, -1, PpnRule::Ax}};
  std::map<std::string, std::vector<int>> buckets;
  buckets[flat_signature(flatten(start))].push_back(0);
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    rep.explored = seen.size();
    if (hits(seen[cur].net)) {
      std::vector<PpnRule> path;
      for (int k = cur; seen[k].parent >= 0; k = seen[k].parent) path.push_back(seen[k].via);
      rep.sequence.insert(rep.sequence.end(), path.rbegin(), path.rend());
      rep.ok = true;
      return rep;
    }
    if (allowed.empty()) break;
    Net base = seen[cur].net;
    for (auto& [r, m] : ppn_steps(base, allowed)) {
      if (seen.size() >= max_states) break;
      Net next = canonical_mnf(m);
      Flat nf = flatten(next);
      auto& bucket = buckets[flat_signature(nf)];
      bool dup = false;
      for (int k : bucket) {
        Flat kf = flatten(seen[k].net);
        Matcher mm{nf, kf};
        if (mm.run()) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      bucket.push_back(static_cast<int>(seen.size()));
      seen.push_back(Node{std::move(next), cur, r});
      frontier.push_back(static_cast<int>(seen.size()) - 1);
    }
  }
  rep.explored = seen.size();
  rep.message = allowed.empty() ? "multiplicative normal forms differ" : "target not reached";
  return rep;
}

// ---------------------------------------------------------------------------
// Export.

namespace {

nlohmann::json net_json(const Net& n) {
  Index ix(n);
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  j["boxes"] = nlohmann::json::object();
  for (std::size_t l = 0; l < n.links.size(); ++l) {
    j["nodes"].push_back({{"id", l}, {"kind", link_kind_name(n.links[l].kind)}});
    if (n.links[l].kind == LinkKind::Box) j["boxes"][std::to_string(l)] = net_json(*n.links[l].inner);
  }
  j["wires"] = nlohmann::json::array();
  nlohmann::json dist = nullptr;
  for (std::size_t w = 0; w < n.wires.size(); ++w) {
    nlohmann::json e;
    e["id"] = w;
    e["from"] = ix.prod[w].link;
    e["from_port"] = ix.prod[w].port;
    if (ix.cons[w].link >= 0) {
      e["to"] = ix.cons[w].link;
      e["to_port"] = ix.cons[w].port;
    } else {
      e["to"] = nullptr;
      e["conclusion"] = ix.cons[w].port;
    }
    e["formula"] = render_formula(n.wires[w]);
    e["label"] = nullptr;
    if (ix.cons[w].link < 0) {
      const Label& lb = n.concl[ix.cons[w].port].label;
      switch (lb.kind) {
        case Label::Kind::Var:
          e["label"] = {{"var", lb.id}};
          break;
        case Label::Kind::Name:
          e["label"] = {{"name", lb.id}};
          break;
        case Label::Kind::Dist:
          dist = w;
          break;
        case Label::Kind::StackOut:
          e["label"] = "output";
          break;
        case Label::Kind::Aux:
          e["label"] = "erased";
          break;
      }
    }
    j["wires"].push_back(e);
  }
  j["distinguished"] = dist;
  return j;
}

void dot_level(const Net& n, const std::string& pre, std::string& out, int depth) {
  Index ix(n);
  std::string ind(static_cast<std::size_t>(depth) * 2 + 2, ' ');
  auto shape = [](LinkKind k) {
    switch (k) {
      case LinkKind::Ax:
        return "invtriangle";
      case LinkKind::Cut:
        return "triangle";
      case LinkKind::Weak:
        return "point";
      case LinkKind::Contr:
        return "diamond";
      case LinkKind::Tensor:
      case LinkKind::Par:
        return "circle";
      case LinkKind::Der:
        return "box";
      case LinkKind::Box:
        return "house";
    }
    return "ellipse";
  };
  auto label = [](LinkKind k) -> std::string {
    switch (k) {
      case LinkKind::Tensor:
        return "*";
      case LinkKind::Par:
        return "|";
      case LinkKind::Der:
        return "?d";
      case LinkKind::Box:
        return "!";
      case LinkKind::Contr:
        return "?c";
      case LinkKind::Weak:
        return "";
      default:
        return link_kind_name(k);
    }
  };
  for (std::size_t l = 0; l < n.links.size(); ++l) {
    const Link& k = n.links[l];
    std::string id = pre + "n" + std::to_string(l);
    out += ind + id + " [shape=" + shape(k.kind) + ", label=\"" + label(k.kind) + "\"];\n";
    if (k.kind == LinkKind::Box) {
      out += ind + "subgraph cluster_" + id + " {\n";
      out += ind + "  label=\"box " + std::to_string(l) + "\";\n";
      dot_level(*k.inner, id + "_", out, depth + 1);
      out += ind + "}\n";
      for (std::size_t c = 0; c < k.inner->concl.size(); ++c)
        out += ind + id + "_c" + std::to_string(c) + " -> " + id + " [style=dashed];\n";
    }
  }
  for (std::size_t c = 0; c < n.concl.size(); ++c) {
    const Label& lb = n.concl[c].label;
    std::string shape_c = lb.kind == Label::Kind::Dist ? "doublecircle" : "plaintext";
    std::string text = render_label(lb);
    if (text.empty()) text = "c" + std::to_string(c);
    out += ind + pre + "c" + std::to_string(c) + " [shape=" + shape_c + ", label=\"" + text + "\"];\n";
  }
  for (std::size_t w = 0; w < n.wires.size(); ++w) {
    std::string from = pre + "n" + std::to_string(ix.prod[w].link);
    std::string to = ix.cons[w].link >= 0 ? pre + "n" + std::to_string(ix.cons[w].link)
                                          : pre + "c" + std::to_string(ix.cons[w].port);
    out += ind + from + " -> " + to + " [label=\"" + render_formula(n.wires[w]) + "\"];\n";
  }
}

}  // namespace

std::string net_to_json(const Net& n) { return net_json(n).dump(); }

std::string net_to_dot(const Net& n) {
  std::string out = "digraph net {\n";
  dot_level(n, "", out, 0);
  out += "}\n";
  return out;
}

}  // namespace lm
