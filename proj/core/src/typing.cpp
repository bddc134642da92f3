#include "lm/typing.hpp"

#include <cctype>
#include <functional>
#include <set>

#include "json.hpp"

namespace lm {

Type base_type(const std::string& name) {
  auto t = std::make_shared<TypeNode>();
  t->tag = TypeNode::Tag::Base;
  t->base = name;
  return t;
}

Type arrow(const Type& a, const Type& b) {
  auto t = std::make_shared<TypeNode>();
  t->tag = TypeNode::Tag::Arrow;
  t->dom = a;
  t->cod = b;
  return t;
}

Type meta_type(int id) {
  auto t = std::make_shared<TypeNode>();
  t->tag = TypeNode::Tag::Meta;
  t->meta = id;
  return t;
}

Type stack_arrow(const std::vector<Type>& s, const Type& b) {
  Type r = b;
  for (auto it = s.rbegin(); it != s.rend(); ++it) r = arrow(*it, r);
  return r;
}

bool type_equal(const Type& a, const Type& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TypeNode::Tag::Base:
      return a->base == b->base;
    case TypeNode::Tag::Meta:
      return a->meta == b->meta;
    case TypeNode::Tag::Arrow:
      return type_equal(a->dom, b->dom) && type_equal(a->cod, b->cod);
  }
  return false;
}

std::string render_type(const Type& t) {
  switch (t->tag) {
    case TypeNode::Tag::Base:
      return t->base;
    case TypeNode::Tag::Meta:
      return "?" + std::to_string(t->meta);
    case TypeNode::Tag::Arrow: {
      std::string d = render_type(t->dom);
      if (t->dom->tag == TypeNode::Tag::Arrow) d = "(" + d + ")";
      return d + " -> " + render_type(t->cod);
    }
  }
  return "?";
}

Type parse_type(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  std::function<Type()> arrow_type;
  std::function<Type()> atom = [&]() -> Type {
    skip();
    if (i < text.size() && text[i] == '(') {
      ++i;
      Type t = arrow_type();
      skip();
      if (i >= text.size() || text[i] != ')') throw SyntaxError(i, "')'");
      ++i;
      return t;
    }
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    if (j == i) throw SyntaxError(i, "type");
    Type t = base_type(text.substr(i, j - i));
    i = j;
    return t;
  };
  arrow_type = [&]() -> Type {
    Type d = atom();
    skip();
    if (i + 1 < text.size() && text[i] == '-' && text[i + 1] == '>') {
      i += 2;
      return arrow(d, arrow_type());
    }
    return d;
  };
  Type t = arrow_type();
  skip();
  if (i != text.size()) throw SyntaxError(i, "end of type");
  return t;
}

const char* typing_rule_name(TypingRule r) {
  switch (r) {
    case TypingRule::Var:
      return "var";
    case TypingRule::App:
      return "app";
    case TypingRule::Abs:
      return "abs";
    case TypingRule::Cont:
      return "cont";
    case TypingRule::Name:
      return "name";
    case TypingRule::Subs:
      return "subs";
    case TypingRule::Repl:
      return "repl";
    case TypingRule::Ren:
      return "ren";
    case TypingRule::Stk:
      return "stk";
  }
  return "?";
}

TypeFailure::TypeFailure(const std::string& msg, Path p)
    : LmError("type error at " + path_string(p) + ": " + msg), path(std::move(p)) {}

namespace {

class Inference {
 public:
  Type fresh() {
    bound_.push_back(nullptr);
    return meta_type(static_cast<int>(bound_.size()) - 1);
  }

  Type walk(Type t) const {
    while (t->tag == TypeNode::Tag::Meta && bound_[t->meta]) t = bound_[t->meta];
    return t;
  }

  Type zonk(const Type& t) const {
    Type w = walk(t);
    if (w->tag != TypeNode::Tag::Arrow) return w;
    Type d = zonk(w->dom);
    return arrow(d, zonk(w->cod));
  }

  bool occurs(int m, const Type& t) const {
    Type w = walk(t);
    if (w->tag == TypeNode::Tag::Meta) return w->meta == m;
    if (w->tag == TypeNode::Tag::Arrow) return occurs(m, w->dom) || occurs(m, w->cod);
    return false;
  }

  void unify(const Type& a, const Type& b, const Path& path) {
    Type x = walk(a);
    Type y = walk(b);
    if (x == y) return;
    if (x->tag == TypeNode::Tag::Meta) {
      if (y->tag == TypeNode::Tag::Meta && y->meta == x->meta) return;
      if (occurs(x->meta, y)) throw TypeFailure("occurs check", path);
      bound_[x->meta] = y;
      return;
    }
    if (y->tag == TypeNode::Tag::Meta) return unify(y, x, path);
    if (x->tag == TypeNode::Tag::Base && y->tag == TypeNode::Tag::Base) {
      if (x->base != y->base) throw TypeFailure("clash " + x->base + " vs " + y->base, path);
      return;
    }
    if (x->tag == TypeNode::Tag::Arrow && y->tag == TypeNode::Tag::Arrow) {
      unify(x->dom, y->dom, path);
      unify(x->cod, y->cod, path);
      return;
    }
    throw TypeFailure("clash " + render_type(zonk(x)) + " vs " + render_type(zonk(y)), path);
  }

  void merge(Context& into, const Context& from, const Path& path) {
    for (auto& [k, t] : from) {
      auto it = into.find(k);
      if (it == into.end())
        into.emplace(k, t);
      else
        unify(it->second, t, path);
    }
  }

  Derivation go(const Object& o, Path& path) {
    const Node& n = *o;
    Derivation d;
    d.conclusion.subject = o;
    Judgment& j = d.conclusion;
    auto sub = [&](int i) {
      path.push_back(i);
      Derivation r = go(n.kids[i], path);
      path.pop_back();
      return r;
    };
    auto take = [&](Context& ctx, const std::string& k) -> Type {
      auto it = ctx.find(k);
      if (it == ctx.end()) return fresh();
      Type t = it->second;
      ctx.erase(it);
      return t;
    };
    switch (n.kind) {
      case Kind::Var:
        d.rule = TypingRule::Var;
        j.type = fresh();
        j.gamma[n.id] = *j.type;
        return d;
      case Kind::App: {
        d.rule = TypingRule::App;
        d.premises.push_back(sub(0));
        d.premises.push_back(sub(1));
        auto& f = d.premises[0].conclusion;
        auto& a = d.premises[1].conclusion;
        j.type = fresh();
        unify(*f.type, arrow(*a.type, *j.type), path);
        j.gamma = f.gamma;
        merge(j.gamma, a.gamma, path);
        j.delta = f.delta;
        merge(j.delta, a.delta, path);
        return d;
      }
      case Kind::Abs: {
        d.rule = TypingRule::Abs;
        d.premises.push_back(sub(0));
        auto& b = d.premises[0].conclusion;
        j.gamma = b.gamma;
        Type dom = take(j.gamma, n.id);
        j.delta = b.delta;
        j.type = arrow(dom, *b.type);
        return d;
      }
      case Kind::Mu: {
        d.rule = TypingRule::Cont;
        d.premises.push_back(sub(0));
        auto& c = d.premises[0].conclusion;
        j.gamma = c.gamma;
        j.delta = c.delta;
        j.type = take(j.delta, n.id);
        return d;
      }
      case Kind::Named: {
        d.rule = TypingRule::Name;
        d.premises.push_back(sub(0));
        auto& t = d.premises[0].conclusion;
        j.gamma = t.gamma;
        j.delta = t.delta;
        merge(j.delta, Context{{n.id, *t.type}}, path);
        return d;
      }
      case Kind::ESub: {
        d.rule = TypingRule::Subs;
        d.premises.push_back(sub(0));
        d.premises.push_back(sub(1));
        auto& t = d.premises[0].conclusion;
        auto& u = d.premises[1].conclusion;
        j.gamma = t.gamma;
        Type b = take(j.gamma, n.id);
        unify(b, *u.type, path);
        merge(j.gamma, u.gamma, path);
        j.delta = t.delta;
        merge(j.delta, u.delta, path);
        j.type = t.type;
        return d;
      }
      case Kind::ERepl: {
        d.rule = TypingRule::Repl;
        d.premises.push_back(sub(0));
        d.premises.push_back(sub(1));
        auto& c = d.premises[0].conclusion;
        auto& s = d.premises[1].conclusion;
        std::vector<Type> st = s.stack_type.empty() ? std::vector<Type>{*s.type} : s.stack_type;
        Type b = fresh();
        j.delta = c.delta;
        Type at = take(j.delta, n.id);
        unify(at, stack_arrow(st, b), path);
        merge(j.delta, s.delta, path);
        merge(j.delta, Context{{n.id2, b}}, path);
        j.gamma = c.gamma;
        merge(j.gamma, s.gamma, path);
        return d;
      }
      case Kind::ERen: {
        d.rule = TypingRule::Ren;
        d.premises.push_back(sub(0));
        auto& c = d.premises[0].conclusion;
        j.gamma = c.gamma;
        j.delta = c.delta;
        Type a = take(j.delta, n.id);
        merge(j.delta, Context{{n.id2, a}}, path);
        return d;
      }
      case Kind::Stack:
        return stack_from(o, 0, path);
    }
    throw TypeFailure("unknown constructor", path);
  }

  // Derivation for the suffix of stack s starting at item i.
  Derivation stack_from(const Object& s, std::size_t i, Path& path) {
    path.push_back(static_cast<int>(i));
    Derivation head = go(s->kids[i], path);
    path.pop_back();
    if (i + 1 == s->kids.size()) return head;
    Derivation rest = stack_from(s, i + 1, path);
    Derivation d;
    d.rule = TypingRule::Stk;
    Judgment& j = d.conclusion;
    j.subject = i == 0 ? s : stack(std::vector<Object>(s->kids.begin() + i, s->kids.end()));
    j.gamma = head.conclusion.gamma;
    merge(j.gamma, rest.conclusion.gamma, path);
    j.delta = head.conclusion.delta;
    merge(j.delta, rest.conclusion.delta, path);
    j.stack_type.push_back(*head.conclusion.type);
    if (rest.conclusion.stack_type.empty())
      j.stack_type.push_back(*rest.conclusion.type);
    else
      j.stack_type.insert(j.stack_type.end(), rest.conclusion.stack_type.begin(),
                          rest.conclusion.stack_type.end());
    d.premises.push_back(std::move(head));
    d.premises.push_back(std::move(rest));
    return d;
  }

  // Replace metas by atoms; names avoid `taken`.
  class Freezer {
   public:
    Freezer(const Inference& inf, std::set<std::string> taken) : inf_(inf), taken_(std::move(taken)) {}
    Type operator()(const Type& t) {
      Type w = inf_.walk(t);
      switch (w->tag) {
        case TypeNode::Tag::Base:
          return w;
        case TypeNode::Tag::Arrow: {
          Type d = (*this)(w->dom);
          return arrow(d, (*this)(w->cod));
        }
        case TypeNode::Tag::Meta: {
          auto it = names_.find(w->meta);
          if (it != names_.end()) return it->second;
          Type b = base_type(next_name());
          names_.emplace(w->meta, b);
          return b;
        }
      }
      return w;
    }

   private:
    std::string next_name() {
      for (;;) {
        int k = counter_++;
        std::string s(1, static_cast<char>('A' + k % 26));
        if (k >= 26) s += std::to_string(k / 26);
        if (!taken_.count(s)) return s;
      }
    }
    const Inference& inf_;
    std::set<std::string> taken_;
    std::map<int, Type> names_;
    int counter_ = 0;
  };

  static void freeze_judgment(Judgment& j, Freezer& fz) {
    if (j.type) j.type = fz(*j.type);
    for (auto& t : j.stack_type) t = fz(t);
    for (auto& [k, t] : j.gamma) t = fz(t);
    for (auto& [k, t] : j.delta) t = fz(t);
  }

  static void freeze_tree(Derivation& d, Freezer& fz) {
    freeze_judgment(d.conclusion, fz);
    for (auto& p : d.premises) freeze_tree(p, fz);
  }

  Typing finish(Derivation d, const std::set<std::string>& taken) const {
    Freezer fz(*this, taken);
    freeze_judgment(d.conclusion, fz);
    freeze_tree(d, fz);
    Typing t;
    t.gamma = d.conclusion.gamma;
    t.delta = d.conclusion.delta;
    t.type = d.conclusion.type;
    t.stack_type = d.conclusion.stack_type;
    t.derivation = std::move(d);
    return t;
  }

 private:
  std::vector<Type> bound_;
};

void collect_atoms(const Type& t, std::set<std::string>& out) {
  if (t->tag == TypeNode::Tag::Base) out.insert(t->base);
  if (t->tag == TypeNode::Tag::Arrow) {
    collect_atoms(t->dom, out);
    collect_atoms(t->cod, out);
  }
}

void fix_singleton_stack(Typing& t, const Object& o) {
  if (o->kind == Kind::Stack && t.stack_type.empty() && t.type) t.stack_type = {*t.type};
}

}  // namespace

Typing infer(const Object& o) {
  Inference inf;
  Path p;
  Derivation d = inf.go(o, p);
  Typing t = inf.finish(std::move(d), {});
  fix_singleton_stack(t, o);
  return t;
}

std::optional<Typing> try_infer(const Object& o) {
  try {
    return infer(o);
  } catch (const TypeFailure&) {
    return std::nullopt;
  }
}

std::optional<Typing> infer_against(const Object& o, const Typing& expected) {
  Inference inf;
  Path p;
  try {
    Derivation d = inf.go(o, p);
    Judgment& j = d.conclusion;
    for (auto& [x, t] : j.gamma) {
      auto it = expected.gamma.find(x);
      if (it != expected.gamma.end()) inf.unify(t, it->second, p);
    }
    for (auto& [a, t] : j.delta) {
      auto it = expected.delta.find(a);
      if (it != expected.delta.end()) inf.unify(t, it->second, p);
    }
    if (j.type && expected.type) inf.unify(*j.type, *expected.type, p);
    std::vector<Type> mine = j.stack_type.empty() && j.type ? std::vector<Type>{*j.type} : j.stack_type;
    if (o->kind == Kind::Stack && mine.size() == expected.stack_type.size())
      for (std::size_t i = 0; i < mine.size(); ++i) inf.unify(mine[i], expected.stack_type[i], p);
    std::set<std::string> taken;
    for (auto& [k, t] : expected.gamma) collect_atoms(t, taken);
    for (auto& [k, t] : expected.delta) collect_atoms(t, taken);
    if (expected.type) collect_atoms(*expected.type, taken);
    for (auto& t : expected.stack_type) collect_atoms(t, taken);
    Typing t = inf.finish(std::move(d), taken);
    fix_singleton_stack(t, o);
    return t;
  } catch (const TypeFailure&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Checking.

namespace {

bool ctx_equal(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first || !type_equal(ia->second, ib->second)) return false;
  return true;
}

bool ctx_union(Context& into, const Context& from) {
  for (auto& [k, t] : from) {
    auto it = into.find(k);
    if (it == into.end())
      into.emplace(k, t);
    else if (!type_equal(it->second, t))
      return false;
  }
  return true;
}

IdSet keys(const Context& c) {
  IdSet r;
  for (auto& [k, t] : c) r.push_back(k);
  return r;
}

bool has_meta(const Type& t) {
  if (t->tag == TypeNode::Tag::Meta) return true;
  if (t->tag == TypeNode::Tag::Arrow) return has_meta(t->dom) || has_meta(t->cod);
  return false;
}

std::vector<Type> stack_types_of(const Judgment& j) {
  if (!j.stack_type.empty()) return j.stack_type;
  if (j.type) return {*j.type};
  return {};
}

struct Checker {
  CheckResult res;
  Path where;

  bool fail(const std::string& msg) {
    res.ok = false;
    res.node = where;
    res.message = msg;
    return false;
  }

  bool subject_is(const Derivation& d, const Object& o) {
    return alpha_equal(d.conclusion.subject, o);
  }

  bool run(const Derivation& d) {
    const Judgment& j = d.conclusion;
    const Object& o = j.subject;
    const Node& n = *o;
    if (keys(j.gamma) != o->fv) return fail("variable context is not the free variables");
    if (keys(j.delta) != o->fn) return fail("name context is not the free names");
    for (auto& [k, t] : j.gamma)
      if (has_meta(t)) return fail("unresolved type variable");
    for (auto& [k, t] : j.delta)
      if (has_meta(t)) return fail("unresolved type variable");
    auto premise_count = [&](std::size_t k) {
      return d.premises.size() == k || fail("wrong number of premises");
    };
    auto term_type = [&](const Judgment& jj) { return jj.type.has_value(); };
    Context g, dl;
    switch (d.rule) {
      case TypingRule::Var:
        if (n.kind != Kind::Var || !premise_count(0) || !j.type) return fail("var: malformed");
        if (!type_equal(j.gamma.at(n.id), *j.type)) return fail("var: type mismatch");
        break;
      case TypingRule::App: {
        if (n.kind != Kind::App || !premise_count(2) || !j.type) return fail("app: malformed");
        auto& f = d.premises[0].conclusion;
        auto& a = d.premises[1].conclusion;
        if (!subject_is(d.premises[0], n.kids[0]) || !subject_is(d.premises[1], n.kids[1]))
          return fail("app: premise subjects");
        if (!term_type(f) || !term_type(a) || !type_equal(*f.type, arrow(*a.type, *j.type)))
          return fail("app: types");
        g = f.gamma;
        dl = f.delta;
        if (!ctx_union(g, a.gamma) || !ctx_union(dl, a.delta)) return fail("app: incompatible contexts");
        break;
      }
      case TypingRule::Abs: {
        if (n.kind != Kind::Abs || !premise_count(1) || !j.type) return fail("abs: malformed");
        auto& b = d.premises[0].conclusion;
        if (!subject_is(d.premises[0], n.kids[0]) || !term_type(b)) return fail("abs: premise");
        if ((*j.type)->tag != TypeNode::Tag::Arrow || !type_equal((*j.type)->cod, *b.type))
          return fail("abs: codomain");
        auto it = b.gamma.find(n.id);
        if (it != b.gamma.end() && !type_equal(it->second, (*j.type)->dom)) return fail("abs: domain");
        g = b.gamma;
        g.erase(n.id);
        dl = b.delta;
        break;
      }
      case TypingRule::Cont: {
        if (n.kind != Kind::Mu || !premise_count(1) || !j.type) return fail("cont: malformed");
        auto& c = d.premises[0].conclusion;
        if (!subject_is(d.premises[0], n.kids[0])) return fail("cont: premise");
        auto it = c.delta.find(n.id);
        if (it != c.delta.end() && !type_equal(it->second, *j.type)) return fail("cont: type");
        g = c.gamma;
        dl = c.delta;
        dl.erase(n.id);
        break;
      }
      case TypingRule::Name: {
        if (n.kind != Kind::Named || !premise_count(1) || j.type) return fail("name: malformed");
        auto& t = d.premises[0].conclusion;
        if (!subject_is(d.premises[0], n.kids[0]) || !term_type(t)) return fail("name: premise");
        g = t.gamma;
        dl = t.delta;
        if (!ctx_union(dl, Context{{n.id, *t.type}})) return fail("name: type");
        break;
      }
      case TypingRule::Subs: {
        if (n.kind != Kind::ESub || !premise_count(2) || !j.type) return fail("subs: malformed");
        auto& t = d.premises[0].conclusion;
        auto& u = d.premises[1].conclusion;
        if (!subject_is(d.premises[0], n.kids[0]) || !subject_is(d.premises[1], n.kids[1]))
          return fail("subs: premise subjects");
        if (!term_type(t) || !term_type(u) || !type_equal(*t.type, *j.type)) return fail("subs: types");
        auto it = t.gamma.find(n.id);
        if (it != t.gamma.end() && !type_equal(it->second, *u.type)) return fail("subs: argument type");
        g = t.gamma;
        g.erase(n.id);
        dl = t.delta;
        if (!ctx_union(g, u.gamma) || !ctx_union(dl, u.delta)) return fail("subs: incompatible contexts");
        break;
      }
      case TypingRule::Repl: {
        if (n.kind != Kind::ERepl || !premise_count(2) || j.type) return fail("repl: malformed");
        auto& c = d.premises[0].conclusion;
        auto& s = d.premises[1].conclusion;
        const Object& st = n.kids[1];
        bool stackOk = subject_is(d.premises[1], st) ||
                       (st->kids.size() == 1 && subject_is(d.premises[1], st->kids[0]));
        if (!subject_is(d.premises[0], n.kids[0]) || !stackOk) return fail("repl: premise subjects");
        auto sts = stack_types_of(s);
        if (sts.size() != st->kids.size()) return fail("repl: stack type length");
        auto ob = j.delta.find(n.id2);
        if (ob == j.delta.end()) return fail("repl: output name untyped");
        Type b = ob->second;
        auto ia = c.delta.find(n.id);
        if (ia != c.delta.end() && !type_equal(ia->second, stack_arrow(sts, b)))
          return fail("repl: replaced name type");
        g = c.gamma;
        dl = c.delta;
        dl.erase(n.id);
        if (!ctx_union(g, s.gamma) || !ctx_union(dl, s.delta) || !ctx_union(dl, Context{{n.id2, b}}))
          return fail("repl: incompatible contexts");
        break;
      }
      case TypingRule::Ren: {
        if (n.kind != Kind::ERen || !premise_count(1) || j.type) return fail("ren: malformed");
        auto& c = d.premises[0].conclusion;
        if (!subject_is(d.premises[0], n.kids[0])) return fail("ren: premise");
        auto ob = j.delta.find(n.id2);
        if (ob == j.delta.end()) return fail("ren: target untyped");
        auto ia = c.delta.find(n.id);
        if (ia != c.delta.end() && !type_equal(ia->second, ob->second)) return fail("ren: types");
        g = c.gamma;
        dl = c.delta;
        dl.erase(n.id);
        if (!ctx_union(dl, Context{{n.id2, ob->second}})) return fail("ren: types");
        break;
      }
      case TypingRule::Stk: {
        if (n.kind != Kind::Stack || n.kids.size() < 2 || !premise_count(2)) return fail("stk: malformed");
        auto& h = d.premises[0].conclusion;
        auto& r = d.premises[1].conclusion;
        std::vector<Object> rest(n.kids.begin() + 1, n.kids.end());
        bool restOk = rest.size() == 1 ? subject_is(d.premises[1], rest[0])
                                       : subject_is(d.premises[1], stack(rest));
        if (!subject_is(d.premises[0], n.kids[0]) || !restOk) return fail("stk: premise subjects");
        auto rt = stack_types_of(r);
        if (!term_type(h) || j.stack_type.size() != rt.size() + 1 || !type_equal(j.stack_type[0], *h.type))
          return fail("stk: types");
        for (std::size_t i = 0; i < rt.size(); ++i)
          if (!type_equal(j.stack_type[i + 1], rt[i])) return fail("stk: types");
        g = h.gamma;
        dl = h.delta;
        if (!ctx_union(g, r.gamma) || !ctx_union(dl, r.delta)) return fail("stk: incompatible contexts");
        break;
      }
    }
    if (d.rule != TypingRule::Var && (!ctx_equal(g, j.gamma) || !ctx_equal(dl, j.delta)))
      return fail(std::string(typing_rule_name(d.rule)) + ": conclusion contexts");
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      where.push_back(static_cast<int>(i));
      if (!run(d.premises[i])) return false;
      where.pop_back();
    }
    return true;
  }
};

}  // namespace

CheckResult check(const Derivation& d) {
  Checker c;
  c.run(d);
  return c.res;
}

bool subject_step_check(const Object& o, const Step& step) {
  auto before = try_infer(o);
  if (!before) throw PreconditionError("subject_step_check: object is not typable");
  const Object& after = step.after;
  for (auto& x : after->fv)
    if (!contains(o->fv, x)) return false;
  for (auto& a : after->fn)
    if (!contains(o->fn, a)) return false;
  auto t = infer_against(after, *before);
  return t && check(t->derivation).ok;
}

bool subject_expansion_check(const Step& step) {
  auto after = try_infer(step.after);
  if (!after) return true;
  auto t = infer_against(step.before, *after);
  if (!t) return false;
  for (auto& [x, ty] : after->gamma) {
    auto it = t->gamma.find(x);
    if (it == t->gamma.end() || !type_equal(it->second, ty)) return false;
  }
  for (auto& [a, ty] : after->delta) {
    auto it = t->delta.find(a);
    if (it == t->delta.end() || !type_equal(it->second, ty)) return false;
  }
  if (after->type && (!t->type || !type_equal(*after->type, *t->type))) return false;
  return check(t->derivation).ok;
}

namespace {

nlohmann::json ctx_json(const Context& c) {
  nlohmann::json j = nlohmann::json::object();
  for (auto& [k, t] : c) j[k] = render_type(t);
  return j;
}

nlohmann::json deriv_json(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = typing_rule_name(d.rule);
  const Judgment& c = d.conclusion;
  j["subject"] = render(c.subject);
  j["gamma"] = ctx_json(c.gamma);
  j["delta"] = ctx_json(c.delta);
  if (c.type) j["type"] = render_type(*c.type);
  if (!c.stack_type.empty()) {
    j["stack_type"] = nlohmann::json::array();
    for (auto& t : c.stack_type) j["stack_type"].push_back(render_type(t));
  }
  j["premises"] = nlohmann::json::array();
  for (auto& p : d.premises) j["premises"].push_back(deriv_json(p));
  return j;
}

}  // namespace

std::string derivation_to_json(const Derivation& d) { return deriv_json(d).dump(); }

std::string render_typing(const Typing& t) {
  std::string s;
  bool first = true;
  for (auto& [x, ty] : t.gamma) {
    s += (first ? "" : ", ") + x + " : " + render_type(ty);
    first = false;
  }
  s += first ? "|- " : " |- ";
  if (!t.stack_type.empty() && t.derivation.conclusion.subject->kind == Kind::Stack) {
    for (std::size_t i = 0; i < t.stack_type.size(); ++i) {
      std::string a = render_type(t.stack_type[i]);
      if (t.stack_type[i]->tag == TypeNode::Tag::Arrow) a = "(" + a + ")";
      s += (i ? " . " : "") + a;
    }
  } else if (t.type) {
    s += render_type(*t.type);
  } else {
    s += "#";
  }
  s += " |";
  first = true;
  for (auto& [a, ty] : t.delta) {
    s += (first ? " '" : ", '") + a + " : " + render_type(ty);
    first = false;
  }
  return s;
}

}  // namespace lm
