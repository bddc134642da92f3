#include "lm/meta.hpp"

#include <utility>

namespace lm {

namespace {

FreshSupply seeded(std::initializer_list<Object> objs) {
  FreshSupply fs;
  for (auto& o : objs) fs.reserve(o);
  return fs;
}

// Binder refresh: returns the new binder and its renamed scope.
std::pair<std::string, Object> refresh(const std::string& id, const Object& scope, bool name,
                                       FreshSupply& fs) {
  std::string id2 = fs.fresh(id);
  return {id2, rename_fresh(scope, id, id2, name)};
}

struct Subst {
  const std::string& x;
  const Object& u;
  FreshSupply& fs;

  Object go(const Object& o) {
    if (!contains(o->fv, x)) return o;
    const Node& n = *o;
    switch (n.kind) {
      case Kind::Var:
        return u;
      case Kind::Abs: {
        std::string y = n.id;
        Object body = n.kids[0];
        if (contains(u->fv, y)) std::tie(y, body) = refresh(y, body, false, fs);
        return abs(y, go(body));
      }
      case Kind::ESub: {
        std::string y = n.id;
        Object body = n.kids[0];
        if (y != x && contains(u->fv, y)) std::tie(y, body) = refresh(y, body, false, fs);
        if (y != x) body = go(body);
        return esub(body, y, go(n.kids[1]), &fs);
      }
      case Kind::Mu:
      case Kind::ERepl:
      case Kind::ERen: {
        std::string a = n.id;
        Object body = n.kids[0];
        if (contains(u->fn, a)) std::tie(a, body) = refresh(a, body, true, fs);
        body = go(body);
        if (n.kind == Kind::Mu) return mu(a, body);
        if (n.kind == Kind::ERen) return eren(body, a, n.id2, &fs);
        return erepl(body, a, go(n.kids[1]), n.id2, &fs);
      }
      default: {
        std::vector<Object> kids;
        for (auto& k : n.kids) kids.push_back(go(k));
        return make_node(n.kind, n.id, n.id2, std::move(kids));
      }
    }
  }
};

struct Repl {
  const std::string& a;
  const Object& s;
  const std::string& out;
  FreshSupply& fs;

  bool clashes_name(const std::string& g) const { return contains(s->fn, g) || g == out; }

  Object go(const Object& o) {
    if (!contains(o->fn, a)) return o;
    const Node& n = *o;
    switch (n.kind) {
      case Kind::Abs: {
        std::string y = n.id;
        Object body = n.kids[0];
        if (contains(s->fv, y)) std::tie(y, body) = refresh(y, body, false, fs);
        return abs(y, go(body));
      }
      case Kind::ESub: {
        std::string y = n.id;
        Object body = n.kids[0];
        if (contains(s->fv, y) && contains(body->fn, a)) std::tie(y, body) = refresh(y, body, false, fs);
        return esub(go(body), y, go(n.kids[1]), &fs);
      }
      case Kind::Mu: {
        std::string g = n.id;
        Object body = n.kids[0];
        if (clashes_name(g)) std::tie(g, body) = refresh(g, body, true, fs);
        return mu(g, go(body));
      }
      case Kind::Named:
        if (n.id == a) return named(out, apply_stack(go(n.kids[0]), s));
        return named(n.id, go(n.kids[0]));
      case Kind::ERepl: {
        std::string g = n.id;
        Object body = n.kids[0];
        if (g != a) {
          if (clashes_name(g)) std::tie(g, body) = refresh(g, body, true, fs);
          body = go(body);
        }
        Object s2 = go(n.kids[1]);
        if (n.id2 == a) return erepl(body, g, stack_concat(s2, s), out, &fs);
        return erepl(body, g, s2, n.id2, &fs);
      }
      case Kind::ERen: {
        std::string g = n.id;
        Object body = n.kids[0];
        if (g != a) {
          if (clashes_name(g)) std::tie(g, body) = refresh(g, body, true, fs);
          body = go(body);
        }
        if (n.id2 == a) {
          std::string beta = fs.fresh(out);
          return eren(erepl(body, g, s, beta, &fs), beta, out, &fs);
        }
        return eren(body, g, n.id2, &fs);
      }
      default: {
        std::vector<Object> kids;
        for (auto& k : n.kids) kids.push_back(go(k));
        return make_node(n.kind, n.id, n.id2, std::move(kids));
      }
    }
  }
};

struct Rename {
  const std::string& a;
  const std::string& b;
  FreshSupply& fs;

  Object go(const Object& o) {
    if (!contains(o->fn, a)) return o;
    const Node& n = *o;
    switch (n.kind) {
      case Kind::Named:
        return named(n.id == a ? b : n.id, go(n.kids[0]));
      case Kind::Mu:
      case Kind::ERepl:
      case Kind::ERen: {
        std::string g = n.id;
        Object body = n.kids[0];
        if (g != a) {
          if (g == b) std::tie(g, body) = refresh(g, body, true, fs);
          body = go(body);
        }
        if (n.kind == Kind::Mu) return mu(g, body);
        std::string tgt = n.id2 == a ? b : n.id2;
        if (n.kind == Kind::ERen) return eren(body, g, tgt, &fs);
        return erepl(body, g, go(n.kids[1]), tgt, &fs);
      }
      case Kind::ESub:
        return esub(go(n.kids[0]), n.id, go(n.kids[1]), &fs);
      default: {
        std::vector<Object> kids;
        for (auto& k : n.kids) kids.push_back(go(k));
        return make_node(n.kind, n.id, n.id2, std::move(kids));
      }
    }
  }
};

}  // namespace

Object substitute(const Object& o, const std::string& x, const Object& u, FreshSupply* fs) {
  FreshSupply local = seeded({o, u});
  FreshSupply& supply = fs ? *fs : local;
  if (fs) {
    supply.reserve(o);
    supply.reserve(u);
  }
  supply.reserve(x);
  return Subst{x, u, supply}.go(o);
}

Object replace(const Object& o, const std::string& a, const Object& s, const std::string& out,
               FreshSupply* fs) {
  if (sort_of(s) != Sort::Stack) throw PreconditionError("replace: stack expected");
  if (contains(s->fn, a) || a == out)
    throw PreconditionError("replace: '" + a + " occurs in the stack or equals the output name");
  FreshSupply local = seeded({o, s});
  FreshSupply& supply = fs ? *fs : local;
  if (fs) {
    supply.reserve(o);
    supply.reserve(s);
  }
  supply.reserve(a);
  supply.reserve(out);
  return Repl{a, s, out, supply}.go(o);
}

Object rename_name(const Object& o, const std::string& a, const std::string& b, FreshSupply* fs) {
  if (a == b) return o;
  FreshSupply local = seeded({o});
  FreshSupply& supply = fs ? *fs : local;
  if (fs) supply.reserve(o);
  supply.reserve(a);
  supply.reserve(b);
  return Rename{a, b, supply}.go(o);
}

Object apply_stack(const Object& t, const Object& s) {
  Object r = t;
  for (auto& item : s->kids) r = app(r, item);
  return r;
}

Object refresh_binders(const Object& o, const IdSet& avoidVars, const IdSet& avoidNames, FreshSupply& fs) {
  const Node& n = *o;
  if (n.kids.empty()) return o;
  std::vector<Object> kids = n.kids;
  std::string id = n.id;
  bool varBinder = n.kind == Kind::Abs || n.kind == Kind::ESub;
  bool nameBinder = n.kind == Kind::Mu || n.kind == Kind::ERepl || n.kind == Kind::ERen;
  if ((varBinder && contains(avoidVars, id)) || (nameBinder && contains(avoidNames, id)))
    std::tie(id, kids[0]) = refresh(id, kids[0], nameBinder, fs);
  bool changed = id != n.id;
  for (auto& k : kids) {
    Object k2 = refresh_binders(k, avoidVars, avoidNames, fs);
    changed = changed || k2 != k;
    k = k2;
  }
  if (!changed) return o;
  return make_node(n.kind, id, n.id2, std::move(kids));
}

}  // namespace lm
