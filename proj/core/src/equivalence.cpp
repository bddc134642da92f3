#include "lm/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "json.hpp"
#include "lm/meta.hpp"

namespace lm {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::exsubs:
      return "exsubs";
    case Axiom::exrepl:
      return "exrepl";
    case Axiom::exren:
      return "exren";
    case Axiom::ppop:
      return "ppop";
    case Axiom::P:
      return "P";
    case Axiom::theta:
      return "theta";
    case Axiom::ren:
      return "ren";
    case Axiom::s1:
      return "sigma1";
    case Axiom::s2:
      return "sigma2";
    case Axiom::s3:
      return "sigma3";
    case Axiom::s4:
      return "sigma4";
    case Axiom::s5:
      return "sigma5";
    case Axiom::s6:
      return "sigma6";
    case Axiom::s7:
      return "sigma7";
    case Axiom::s8:
      return "sigma8";
  }
  return "?";
}

std::optional<Axiom> axiom_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Axiom::s8); ++i)
    if (s == axiom_name(static_cast<Axiom>(i))) return static_cast<Axiom>(i);
  return std::nullopt;
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equivalent:
      return "Equivalent";
    case Verdict::Kind::NotEquivalent:
      return "NotEquivalent";
    case Verdict::Kind::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

IdSet idset(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

IdSet with(IdSet s, std::initializer_list<std::string> extra) {
  s.insert(s.end(), extra.begin(), extra.end());
  return idset(std::move(s));
}

bool binds_name(Kind k) { return k == Kind::Mu || k == Kind::ERepl || k == Kind::ERen; }
bool binds_var(Kind k) { return k == Kind::Abs || k == Kind::ESub; }

// Positions reached from the root through first children only (the linear
// contexts), excluding the root.
std::vector<Path> spine(const Object& o) {
  std::vector<Path> out;
  Path p;
  const Node* cur = o.get();
  while (!cur->kids.empty() && cur->kind != Kind::Stack) {
    p.push_back(0);
    cur = cur->kids[0].get();
    out.push_back(p);
  }
  return out;
}

// Binders on the way from the root to (excluding) the node at path p.
bool path_binds(const Object& o, const Path& p, const IdSet& vars, const IdSet& names) {
  const Node* cur = o.get();
  for (int i : p) {
    if (i == 0) {
      if (binds_var(cur->kind) && contains(vars, cur->id)) return true;
      if (binds_name(cur->kind) && contains(names, cur->id)) return true;
    }
    cur = cur->kids[i].get();
  }
  return false;
}

// Renames the selected free occurrences (by traversal index) of name a to b.
struct SomeRename {
  const std::string& a;
  const std::string& b;
  unsigned mask;
  int index = 0;

  Object go(const Object& o) {
    const Node& n = *o;
    if (!contains(n.fn, a)) return o;
    std::string id = n.id, id2 = n.id2;
    auto hit = [&]() { return (mask >> index++) & 1U; };
    if (n.kind == Kind::Named && n.id == a && hit()) id = b;
    std::vector<Object> kids;
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      bool shadow = i == 0 && binds_name(n.kind) && n.id == a;
      kids.push_back(shadow ? n.kids[i] : go(n.kids[i]));
    }
    if ((n.kind == Kind::ERepl || n.kind == Kind::ERen) && n.id2 == a && hit()) id2 = b;
    return make_node(n.kind, id, id2, std::move(kids));
  }
};

int occurrences(const Object& o, const std::string& a) {
  SomeRename r{a, a, 0};
  r.go(o);
  return r.index;
}

// Commands obtained by moving a subset (at most 4 occurrences considered) of
// the free occurrences of `a` to a fresh name; returns (fresh, command).
std::vector<std::pair<std::string, Object>> split_name(const Object& c, const std::string& a, FreshSupply& fs) {
  std::vector<std::pair<std::string, Object>> out;
  int k = std::min(occurrences(c, a), 4);
  std::string g = fs.fresh(a);
  for (unsigned mask = 0; mask < (1U << k); ++mask) {
    SomeRename r{a, g, mask};
    out.emplace_back(g, r.go(c));
  }
  return out;
}

using Local = std::vector<std::tuple<Axiom, bool, bool, Object>>;

Object rename_bound(const Object& body, std::string from, bool name, FreshSupply& fs, std::string& to) {
  to = fs.fresh(from);
  return rename_fresh(body, from, to, name);
}

// ---- ΛM equations ----------------------------------------------------------

void exsubs_moves(const Object& x, FreshSupply& fs, Local& out) {
  const Node& n = *x;
  if (n.kind == Kind::ESub) {
    const Object& u = n.kids[1];
    Object t = refresh_binders(n.kids[0], with(u->fv, {n.id}), u->fn, fs);
    for (const Path& p : spine(t)) {
      const Object& h = at(t, p);
      if (sort_of(h) != Sort::Term) continue;
      if (count_var(t, n.id) != count_var(h, n.id)) continue;
      out.emplace_back(Axiom::exsubs, true, false, replace_at(t, p, esub(h, n.id, u, &fs), &fs));
    }
  }
  if (sort_of(x) != Sort::Term) return;
  for (const Path& p : spine(x)) {
    const Object& q = at(x, p);
    if (q->kind != Kind::ESub) continue;
    const Object& u = q->kids[1];
    if (path_binds(x, p, u->fv, u->fn)) continue;
    std::string v = q->id;
    Object t = q->kids[0];
    Object y = replace_at(x, p, t, &fs);
    if (count_var(y, v) != count_var(t, v)) {
      t = rename_bound(t, v, false, fs, v);
      y = replace_at(x, p, t, &fs);
    }
    out.emplace_back(Axiom::exsubs, false, false, esub(y, v, u, &fs));
  }
}

void exrepl_moves(const Object& x, FreshSupply& fs, Local& out) {
  const Node& n = *x;
  if (n.kind == Kind::ERepl) {
    const Object& s = n.kids[1];
    Object c = refresh_binders(n.kids[0], s->fv, with(s->fn, {n.id, n.id2}), fs);
    for (const Path& p : spine(c)) {
      const Object& h = at(c, p);
      if (sort_of(h) != Sort::Command) continue;
      if (count_name(c, n.id) != count_name(h, n.id)) continue;
      out.emplace_back(Axiom::exrepl, true, false, replace_at(c, p, erepl(h, n.id, s, n.id2, &fs), &fs));
    }
  }
  if (sort_of(x) != Sort::Command) return;
  for (const Path& p : spine(x)) {
    const Object& q = at(x, p);
    if (q->kind != Kind::ERepl) continue;
    const Object& s = q->kids[1];
    if (path_binds(x, p, s->fv, with(s->fn, {q->id2}))) continue;
    std::string a = q->id;
    Object c = q->kids[0];
    Object y = replace_at(x, p, c, &fs);
    if (count_name(y, a) != count_name(c, a)) {
      c = rename_bound(c, a, true, fs, a);
      y = replace_at(x, p, c, &fs);
    }
    out.emplace_back(Axiom::exrepl, false, false, erepl(y, a, s, q->id2, &fs));
  }
}

void exren_moves(const Object& x, FreshSupply& fs, Local& out) {
  const Node& n = *x;
  if (n.kind == Kind::ERen) {
    Object c = refresh_binders(n.kids[0], {}, idset({n.id, n.id2}), fs);
    for (const Path& p : spine(c)) {
      const Object& h = at(c, p);
      if (sort_of(h) != Sort::Command) continue;
      if (count_name(c, n.id) != count_name(h, n.id)) continue;
      out.emplace_back(Axiom::exren, true, false, replace_at(c, p, eren(h, n.id, n.id2, &fs), &fs));
    }
  }
  if (sort_of(x) != Sort::Command) return;
  for (const Path& p : spine(x)) {
    const Object& q = at(x, p);
    if (q->kind != Kind::ERen) continue;
    if (path_binds(x, p, {}, {q->id2})) continue;
    std::string a = q->id;
    Object c = q->kids[0];
    Object y = replace_at(x, p, c, &fs);
    if (count_name(y, a) != count_name(c, a)) {
      c = rename_bound(c, a, true, fs, a);
      y = replace_at(x, p, c, &fs);
    }
    out.emplace_back(Axiom::exren, false, false, eren(y, a, q->id2, &fs));
  }
}

// [a'] \x. mu a. [b'] \y. mu b. c  <->  [b'] \y. mu b. [a'] \x. mu a. c
std::optional<Object> pop_pop(const Object& o, FreshSupply& fs) {
  const Node& n = *o;
  if (n.kind != Kind::Named) return std::nullopt;
  const Object& l1 = n.kids[0];
  if (l1->kind != Kind::Abs || l1->kids[0]->kind != Kind::Mu) return std::nullopt;
  const Object& m1 = l1->kids[0];
  const Object& n2 = m1->kids[0];
  if (n2->kind != Kind::Named) return std::nullopt;
  const Object& l2 = n2->kids[0];
  if (l2->kind != Kind::Abs || l2->kids[0]->kind != Kind::Mu) return std::nullopt;
  const Object& m2 = l2->kids[0];
  std::string a1 = n.id, x = l1->id, a = m1->id, b1 = n2->id, y = l2->id, b = m2->id;
  if (a == b1) return std::nullopt;
  Object c = m2->kids[0];
  if (b == a1 || b == a) c = rename_bound(c, b, true, fs, b);
  if (y == x) c = rename_bound(c, y, false, fs, y);
  return named(b1, abs(y, mu(b, named(a1, abs(x, mu(a, c))))));
}

void sigma_local(const Object& x, Family fam, bool expand, FreshSupply& fs, Local& out) {
  const Node& n = *x;
  exsubs_moves(x, fs, out);
  exrepl_moves(x, fs, out);
  exren_moves(x, fs, out);
  if (auto r = pop_pop(x, fs)) out.emplace_back(Axiom::ppop, true, false, *r);
  if (n.kind == Kind::Named && n.kids[0]->kind == Kind::Mu) {
    const Object& m = n.kids[0];
    out.emplace_back(Axiom::P, true, false, eren(m->kids[0], m->id, n.id, &fs));
  }
  if (expand && n.kind == Kind::ERen) out.emplace_back(Axiom::P, false, true, named(n.id2, mu(n.id, n.kids[0])));
  if (n.kind == Kind::Mu && n.kids[0]->kind == Kind::Named && n.kids[0]->id == n.id &&
      !contains(n.kids[0]->kids[0]->fn, n.id))
    out.emplace_back(Axiom::theta, true, false, n.kids[0]->kids[0]);
  if (expand && sort_of(x) == Sort::Term && x->kind != Kind::Stack) {
    std::string a = fs.fresh("a");
    out.emplace_back(Axiom::theta, false, true, mu(a, named(a, x)));
  }
  if (fam == Family::SigmaRen) {
    if (n.kind == Kind::ERen) out.emplace_back(Axiom::ren, true, false, rename_name(n.kids[0], n.id, n.id2, &fs));
    if (expand && sort_of(x) == Sort::Command)
      for (const auto& b : x->fn)
        for (auto& [g, c] : split_name(x, b, fs)) out.emplace_back(Axiom::ren, false, true, eren(c, g, b, &fs));
  }
}

// ---- Laurent's equations ---------------------------------------------------

void laurent_local(const Object& x, bool expand, FreshSupply& fs, Local& out) {
  const Node& n = *x;
  auto is = [](const Object& o, Kind k) { return o->kind == k; };
  if (n.kind == Kind::App) {
    const Object& f = n.kids[0];
    const Object& v = n.kids[1];
    // s1: (\y.\x.t) v -> \x.(\y.t) v
    if (is(f, Kind::Abs) && is(f->kids[0], Kind::Abs)) {
      std::string y = f->id, xv = f->kids[0]->id;
      Object t = f->kids[0]->kids[0];
      if (xv == y || contains(v->fv, xv)) t = rename_bound(t, xv, false, fs, xv);
      out.emplace_back(Axiom::s1, true, false, abs(xv, app(abs(y, t), v)));
    }
    // s2: (\x. t v') u -> ((\x.t) u) v'
    if (is(f, Kind::Abs) && is(f->kids[0], Kind::App) && !contains(f->kids[0]->kids[1]->fv, f->id)) {
      const Object& body = f->kids[0];
      out.emplace_back(Axiom::s2, true, false, app(app(abs(f->id, body->kids[0]), v), body->kids[1]));
    }
    // s2 reversed: ((\x.t) u) v -> (\x. t v) u
    if (is(f, Kind::App) && is(f->kids[0], Kind::Abs)) {
      std::string xv = f->kids[0]->id;
      Object t = f->kids[0]->kids[0];
      if (contains(v->fv, xv)) t = rename_bound(t, xv, false, fs, xv);
      out.emplace_back(Axiom::s2, false, false, app(abs(xv, app(t, v)), f->kids[1]));
    }
    // s3: (\x. mu a. [b] u) w -> mu a. [b] (\x.u) w
    if (is(f, Kind::Abs) && is(f->kids[0], Kind::Mu) && is(f->kids[0]->kids[0], Kind::Named)) {
      std::string a = f->kids[0]->id;
      Object c = f->kids[0]->kids[0];
      if (contains(v->fn, a)) c = rename_bound(c, a, true, fs, a);
      out.emplace_back(Axiom::s3, true, false, mu(a, named(c->id, app(abs(f->id, c->kids[0]), v))));
    }
  }
  // s1 reversed: \x.(\y.t) v -> (\y.\x.t) v
  if (n.kind == Kind::Abs && is(n.kids[0], Kind::App) && is(n.kids[0]->kids[0], Kind::Abs) &&
      !contains(n.kids[0]->kids[1]->fv, n.id)) {
    const Object& inner = n.kids[0]->kids[0];
    std::string y = inner->id;
    Object t = inner->kids[0];
    if (y == n.id) t = rename_bound(t, y, false, fs, y);
    out.emplace_back(Axiom::s1, false, false, app(abs(y, abs(n.id, t)), n.kids[0]->kids[1]));
  }
  // s3 reversed: mu a. [b] (\x.u) w -> (\x. mu a. [b] u) w
  if (n.kind == Kind::Mu && is(n.kids[0], Kind::Named) && is(n.kids[0]->kids[0], Kind::App) &&
      is(n.kids[0]->kids[0]->kids[0], Kind::Abs) && !contains(n.kids[0]->kids[0]->kids[1]->fn, n.id)) {
    const Object& ap = n.kids[0]->kids[0];
    const Object& lam = ap->kids[0];
    out.emplace_back(Axiom::s3, false, false,
                     app(abs(lam->id, mu(n.id, named(n.kids[0]->id, lam->kids[0]))), ap->kids[1]));
  }
  if (n.kind == Kind::Named && is(n.kids[0], Kind::App) && is(n.kids[0]->kids[0], Kind::Mu)) {
    // s4: [a'] (mu a. [b'] (mu b. c) w) v  <->  [b'] (mu b. [a'] (mu a. c) v) w
    const Object& v = n.kids[0]->kids[1];
    const Object& ma = n.kids[0]->kids[0];
    const Object& nb = ma->kids[0];
    std::string a1 = n.id, a = ma->id;
    if (is(nb, Kind::Named) && is(nb->kids[0], Kind::App) && is(nb->kids[0]->kids[0], Kind::Mu)) {
      const Object& w = nb->kids[0]->kids[1];
      const Object& mb = nb->kids[0]->kids[0];
      std::string b1 = nb->id, b = mb->id;
      if (!contains(w->fn, a) && a != b1) {
        Object c = mb->kids[0];
        if (contains(v->fn, b) || b == a1 || b == a) c = rename_bound(c, b, true, fs, b);
        out.emplace_back(Axiom::s4, true, false, named(b1, app(mu(b, named(a1, app(mu(a, c), v))), w)));
      }
    }
    // s5: [a'] (mu a. [b'] \x. mu b. c) v -> [b'] \x. mu b. [a'] (mu a. c) v
    if (is(nb, Kind::Named) && is(nb->kids[0], Kind::Abs) && is(nb->kids[0]->kids[0], Kind::Mu)) {
      const Object& lam = nb->kids[0];
      const Object& mb = lam->kids[0];
      std::string b1 = nb->id, xv = lam->id, b = mb->id;
      if (a != b1) {
        Object c = mb->kids[0];
        if (contains(v->fv, xv)) c = rename_bound(c, xv, false, fs, xv);
        if (contains(v->fn, b) || b == a1 || b == a) c = rename_bound(c, b, true, fs, b);
        out.emplace_back(Axiom::s5, true, false, named(b1, abs(xv, mu(b, named(a1, app(mu(a, c), v))))));
      }
    }
  }
  // s5 reversed: [b'] \x. mu b. [a'] (mu a. c) v -> [a'] (mu a. [b'] \x. mu b. c) v
  if (n.kind == Kind::Named && is(n.kids[0], Kind::Abs) && is(n.kids[0]->kids[0], Kind::Mu) &&
      is(n.kids[0]->kids[0]->kids[0], Kind::Named) && is(n.kids[0]->kids[0]->kids[0]->kids[0], Kind::App) &&
      is(n.kids[0]->kids[0]->kids[0]->kids[0]->kids[0], Kind::Mu)) {
    const Object& lam = n.kids[0];
    const Object& mb = lam->kids[0];
    const Object& na = mb->kids[0];
    const Object& ap = na->kids[0];
    const Object& ma = ap->kids[0];
    const Object& v = ap->kids[1];
    std::string b1 = n.id, xv = lam->id, b = mb->id, a1 = na->id, a = ma->id;
    if (!contains(v->fv, xv) && !contains(v->fn, b) && b != a1) {
      Object c = ma->kids[0];
      if (a == b1 || a == b) c = rename_bound(c, a, true, fs, a);
      out.emplace_back(Axiom::s5, false, false, named(a1, app(mu(a, named(b1, abs(xv, mu(b, c)))), v)));
    }
  }
  if (auto r = pop_pop(x, fs)) out.emplace_back(Axiom::s6, true, false, *r);
  // s7: [a] mu b. c -> c{b := a}
  if (n.kind == Kind::Named && is(n.kids[0], Kind::Mu))
    out.emplace_back(Axiom::s7, true, false, rename_name(n.kids[0]->kids[0], n.kids[0]->id, n.id, &fs));
  if (expand && sort_of(x) == Sort::Command)
    for (const auto& a : x->fn)
      for (auto& [g, c] : split_name(x, a, fs)) out.emplace_back(Axiom::s7, false, true, named(a, mu(g, c)));
  // s8: mu a. [a] v -> v
  if (n.kind == Kind::Mu && is(n.kids[0], Kind::Named) && n.kids[0]->id == n.id &&
      !contains(n.kids[0]->kids[0]->fn, n.id))
    out.emplace_back(Axiom::s8, true, false, n.kids[0]->kids[0]);
  if (expand && sort_of(x) == Sort::Term && x->kind != Kind::Stack) {
    std::string a = fs.fresh("a");
    out.emplace_back(Axiom::s8, false, true, mu(a, named(a, x)));
  }
}

void collect_moves(const Object& root, const Object& x, Path& path, Family fam, bool expand, FreshSupply& fs,
                   std::vector<Move>& out) {
  Local local;
  if (fam == Family::Laurent)
    laurent_local(x, expand, fs, local);
  else
    sigma_local(x, fam, expand, fs, local);
  for (auto& [ax, fwd, exp, res] : local) {
    Object whole = replace_at(root, path, res, &fs);
    if (fam != Family::Laurent && !is_plain_form(whole)) continue;
    out.push_back(Move{ax, fwd, exp, path, whole});
  }
  for (std::size_t i = 0; i < x->kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_moves(root, x->kids[i], path, fam, expand, fs, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<Move> moves(const Object& o, Family fam, bool allowExpansion) {
  std::vector<Move> out;
  FreshSupply fs(o);
  Path p;
  collect_moves(o, o, p, fam, allowExpansion, fs, out);
  return out;
}

std::vector<Object> sigma_neighbors(const Object& o, int expandDepth) {
  if (!is_plain_form(o)) throw NotPlainForm("sigma_neighbors: input has a plain redex");
  std::vector<Object> out;
  std::set<std::string> seen;
  for (auto& m : moves(o, Family::Sigma, expandDepth > 0))
    if (seen.insert(alpha_key(m.result)).second) out.push_back(m.result);
  return out;
}

// ---------------------------------------------------------------------------
// Search.

namespace {

struct SearchNode {
  Object obj;
  int parent;
  WitnessStep step;
  int used;
};

struct Side {
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, int> index;  // alpha key -> node
  std::vector<int> frontier;
};

Witness chain(const Side& s, int k) {
  Witness w;
  for (; s.nodes[k].parent >= 0; k = s.nodes[k].parent) w.push_back(s.nodes[k].step);
  std::reverse(w.begin(), w.end());
  return w;
}

Witness join(const Side& a, int ka, const Side& b, int kb) {
  Witness w = chain(a, ka);
  Witness back = chain(b, kb);
  for (auto it = back.rbegin(); it != back.rend(); ++it)
    w.push_back(WitnessStep{it->axiom, !it->forward, it->path, it->after, it->before});
  return w;
}

Verdict search(const Object& o, const Object& p, std::size_t budget, Family fam, int expandDepth) {
  Verdict v;
  std::size_t explored = 0;
  for (int depth = 0; depth <= expandDepth; ++depth) {
    Side sides[2];
    const Object roots[2] = {o, p};
    for (int s = 0; s < 2; ++s) {
      sides[s].nodes.push_back(SearchNode{roots[s], -1, {}, 0});
      sides[s].index[alpha_key(roots[s])] = 0;
      sides[s].frontier = {0};
    }
    ++explored;
    if (auto it = sides[1].index.find(alpha_key(o)); it != sides[1].index.end()) {
      v.kind = Verdict::Kind::Equivalent;
      v.explored = explored;
      return v;
    }
    while (!sides[0].frontier.empty() || !sides[1].frontier.empty()) {
      int s = sides[0].frontier.empty()                                    ? 1
              : sides[1].frontier.empty()                                  ? 0
              : sides[0].frontier.size() <= sides[1].frontier.size() ? 0
                                                                           : 1;
      Side& me = sides[s];
      Side& other = sides[1 - s];
      std::vector<int> layer;
      layer.swap(me.frontier);
      for (int k : layer) {
        Object cur = me.nodes[k].obj;
        int used = me.nodes[k].used;
        for (Move& m : moves(cur, fam, used < depth)) {
          int nu = used + (m.expansion ? 1 : 0);
          std::string key = alpha_key(m.result);
          auto it = me.index.find(key);
          if (it != me.index.end() && me.nodes[it->second].used <= nu) continue;
          int id = static_cast<int>(me.nodes.size());
          me.nodes.push_back(SearchNode{m.result, k, WitnessStep{m.axiom, m.forward, m.path, cur, m.result}, nu});
          me.index[key] = id;
          me.frontier.push_back(id);
          if (++explored > budget) {
            v.kind = Verdict::Kind::Unknown;
            v.explored = explored;
            return v;
          }
          auto hit = other.index.find(key);
          if (hit != other.index.end()) {
            v.kind = Verdict::Kind::Equivalent;
            v.path = s == 0 ? join(sides[0], id, sides[1], hit->second) : join(sides[0], hit->second, sides[1], id);
            v.explored = explored;
            return v;
          }
        }
      }
    }
    v.closed_set_size = sides[0].nodes.size() + sides[1].nodes.size();
  }
  v.kind = Verdict::Kind::NotEquivalent;
  v.explored = explored;
  return v;
}

}  // namespace

Verdict sigma_equiv(const Object& o, const Object& p, std::size_t budget, bool withRen, int expandDepth) {
  if (!is_plain_form(o) || !is_plain_form(p)) throw NotPlainForm("sigma_equiv: inputs must be plain forms");
  if (sort_of(o) != sort_of(p)) throw SortMismatch("sigma_equiv: objects of different sorts");
  return search(o, p, budget, withRen ? Family::SigmaRen : Family::Sigma, expandDepth);
}

Verdict laurent_equiv(const Object& o, const Object& p, std::size_t budget, int expandDepth) {
  if (!is_lambda_mu(o) || !is_lambda_mu(p)) throw NotLambdaMu("laurent_equiv: explicit operators present");
  if (sort_of(o) != sort_of(p)) throw SortMismatch("laurent_equiv: objects of different sorts");
  return search(o, p, budget, Family::Laurent, expandDepth);
}

bool replay(const Object& o, const Object& p, const Witness& w, Family fam) {
  Object cur = o;
  for (const WitnessStep& st : w) {
    if (!alpha_equal(st.before, cur)) return false;
    auto instance = [&](const Object& from, const Object& to) {
      for (auto& m : moves(from, fam, true))
        if (m.axiom == st.axiom && m.path == st.path && alpha_equal(m.result, to)) return true;
      return false;
    };
    if (!instance(st.before, st.after) && !instance(st.after, st.before)) return false;
    cur = st.after;
  }
  return alpha_equal(cur, p);
}

// ---------------------------------------------------------------------------
// Expansion into λμ.

Object fexp(const Object& o) {
  const Node& n = *o;
  switch (n.kind) {
    case Kind::Var:
      return o;
    case Kind::App:
      return app(fexp(n.kids[0]), fexp(n.kids[1]));
    case Kind::Abs:
      return abs(n.id, fexp(n.kids[0]));
    case Kind::Mu:
      return mu(n.id, fexp(n.kids[0]));
    case Kind::Named:
      return named(n.id, fexp(n.kids[0]));
    case Kind::ESub:
      return app(abs(n.id, fexp(n.kids[0])), fexp(n.kids[1]));
    case Kind::ERepl:
      return named(n.id2, apply_stack(mu(n.id, fexp(n.kids[0])), fexp(n.kids[1])));
    case Kind::ERen:
      return named(n.id2, mu(n.id, fexp(n.kids[0])));
    case Kind::Stack: {
      std::vector<Object> items;
      for (auto& k : n.kids) items.push_back(fexp(k));
      return stack(std::move(items));
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Bisimulation diagrams.

namespace {

Verdict relate(const Object& a, const Object& b, std::size_t budget, int depth, bool laurent) {
  return laurent ? laurent_equiv(a, b, budget, depth) : sigma_equiv(a, b, budget, false, depth);
}

void match_side(bool left, const std::vector<Step>& mine, const std::vector<Step>& theirs, std::size_t budget,
                int expandDepth, bool laurent, BisimReport& rep) {
  for (const Step& s : mine) {
    BisimEntry e{left, s, std::nullopt, Verdict::Kind::NotEquivalent, {}};
    bool unknown = false;
    std::vector<const Step*> cands;
    for (const Step& t : theirs)
      if (t.after->fv == s.after->fv && t.after->fn == s.after->fn && sort_of(t.after) == sort_of(s.after))
        cands.push_back(&t);
    for (const Step* t : cands)
      if (alpha_equal(s.after, t->after)) {
        e.match = *t;
        e.verdict = Verdict::Kind::Equivalent;
        break;
      }
    for (int depth = 0; depth <= expandDepth && !e.match; ++depth) {
      unknown = false;
      for (const Step* t : cands) {
        Verdict v = left ? relate(s.after, t->after, budget, depth, laurent)
                         : relate(t->after, s.after, budget, depth, laurent);
        if (v.kind == Verdict::Kind::Equivalent) {
          e.match = *t;
          e.verdict = v.kind;
          e.witness = v.path;
          break;
        }
        if (v.kind == Verdict::Kind::Unknown) unknown = true;
      }
    }
    if (!e.match) {
      e.verdict = unknown ? Verdict::Kind::Unknown : Verdict::Kind::NotEquivalent;
      if (unknown)
        rep.unknown = true;
      else
        rep.ok = false;
      if (rep.failure.empty())
        rep.failure = std::string(left ? "left" : "right") + " " + rule_name(s.rule) + "-step at " +
                      path_string(s.path) + " to " + render(s.after) + " is unmatched";
    }
    rep.entries.push_back(std::move(e));
  }
}

}  // namespace

BisimReport bisim_diagram(const Object& o, const Object& p, std::size_t budget, int expandDepth, bool laurent) {
  Verdict pre = relate(o, p, budget, expandDepth, laurent);
  if (pre.kind != Verdict::Kind::Equivalent) throw PreconditionError("bisim_diagram: objects are not related");
  BisimReport rep;
  std::vector<Step> so = laurent ? lmu_steps(o) : meaningful_steps(o);
  std::vector<Step> sp = laurent ? lmu_steps(p) : meaningful_steps(p);
  match_side(true, so, sp, budget, expandDepth, laurent, rep);
  match_side(false, sp, so, budget, expandDepth, laurent, rep);
  if (rep.unknown && rep.ok) rep.ok = false;
  return rep;
}

namespace {

nlohmann::json witness_json(const Witness& w) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& s : w)
    j.push_back({{"axiom", axiom_name(s.axiom)},
                 {"orientation", s.forward ? "lr" : "rl"},
                 {"path", s.path},
                 {"before", render(s.before)},
                 {"after", render(s.after)}});
  return j;
}

}  // namespace

std::string witness_to_json(const Witness& w) { return witness_json(w).dump(); }

std::string verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["verdict"] = verdict_name(v.kind);
  if (v.kind == Verdict::Kind::Equivalent) j["path"] = witness_json(v.path);
  if (v.kind == Verdict::Kind::NotEquivalent) j["closed_set_size"] = v.closed_set_size;
  j["explored"] = v.explored;
  return j.dump();
}

}  // namespace lm
