#include "lm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>
#include <utility>

#include "json.hpp"

namespace lm {

namespace {

IdSet set_union(const IdSet& a, const IdSet& b) {
  IdSet r;
  r.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

IdSet set_minus(const IdSet& a, const std::string& x) {
  IdSet r;
  r.reserve(a.size());
  for (const auto& e : a)
    if (e != x) r.push_back(e);
  return r;
}

IdSet set_with(const IdSet& a, const std::string& x) { return set_union(a, IdSet{x}); }

}  // namespace

SyntaxError::SyntaxError(std::size_t pos, std::string exp)
    : LmError("syntax error at " + std::to_string(pos) + ": expected " + exp),
      position(pos),
      expected(std::move(exp)) {}

bool contains(const IdSet& s, const std::string& id) {
  return std::binary_search(s.begin(), s.end(), id);
}

Sort sort_of(const Object& o) {
  switch (o->kind) {
    case Kind::Named:
    case Kind::ERepl:
    case Kind::ERen:
      return Sort::Command;
    case Kind::Stack:
      return Sort::Stack;
    default:
      return Sort::Term;
  }
}

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Term:
      return "term";
    case Sort::Command:
      return "command";
    case Sort::Stack:
      return "stack";
  }
  return "?";
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Var:
      return "Var";
    case Kind::App:
      return "App";
    case Kind::Abs:
      return "Abs";
    case Kind::Mu:
      return "Mu";
    case Kind::ESub:
      return "ESub";
    case Kind::Named:
      return "Named";
    case Kind::ERepl:
      return "ERepl";
    case Kind::ERen:
      return "ERen";
    case Kind::Stack:
      return "Stack";
  }
  return "?";
}

void FreshSupply::reserve(const Object& o) {
  for (auto& id : identifiers(o)) used_.insert(id);
}

std::string FreshSupply::fresh(const std::string& base) {
  std::string stem = base;
  while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  for (int k = 1;; ++k) {
    std::string cand = stem + std::to_string(k);
    if (used_.insert(cand).second) return cand;
  }
}

Object make_node(Kind kind, std::string id, std::string id2, std::vector<Object> kids) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->id = std::move(id);
  n->id2 = std::move(id2);
  n->kids = std::move(kids);
  n->size = 1;
  for (auto& k : n->kids) n->size += k->size;
  switch (kind) {
    case Kind::Var:
      n->fv = {n->id};
      break;
    case Kind::App:
    case Kind::Stack:
      for (auto& k : n->kids) {
        n->fv = set_union(n->fv, k->fv);
        n->fn = set_union(n->fn, k->fn);
      }
      break;
    case Kind::Abs:
      n->fv = set_minus(n->kids[0]->fv, n->id);
      n->fn = n->kids[0]->fn;
      break;
    case Kind::Mu:
      n->fv = n->kids[0]->fv;
      n->fn = set_minus(n->kids[0]->fn, n->id);
      break;
    case Kind::ESub:
      n->fv = set_union(set_minus(n->kids[0]->fv, n->id), n->kids[1]->fv);
      n->fn = set_union(n->kids[0]->fn, n->kids[1]->fn);
      break;
    case Kind::Named:
      n->fv = n->kids[0]->fv;
      n->fn = set_with(n->kids[0]->fn, n->id);
      break;
    case Kind::ERepl:
      n->fv = set_union(n->kids[0]->fv, n->kids[1]->fv);
      n->fn = set_with(set_union(set_minus(n->kids[0]->fn, n->id), n->kids[1]->fn), n->id2);
      break;
    case Kind::ERen:
      n->fv = n->kids[0]->fv;
      n->fn = set_with(set_minus(n->kids[0]->fn, n->id), n->id2);
      break;
  }
  return n;
}

Object rename_fresh(const Object& o, const std::string& from, const std::string& to, bool name) {
  if (!contains(name ? o->fn : o->fv, from)) return o;
  const Node& n = *o;
  auto rec = [&](const Object& k) { return rename_fresh(k, from, to, name); };
  std::vector<Object> kids;
  kids.reserve(n.kids.size());
  switch (n.kind) {
    case Kind::Var:
      return make_node(Kind::Var, to, "", {});
    case Kind::Abs:
    case Kind::ESub:
      // the variable binder cannot equal `from` here when renaming variables in its scope
      kids.push_back((!name && n.id == from) ? n.kids[0] : rec(n.kids[0]));
      if (n.kind == Kind::ESub) kids.push_back(rec(n.kids[1]));
      return make_node(n.kind, n.id, n.id2, std::move(kids));
    case Kind::Mu:
    case Kind::ERen:
    case Kind::ERepl: {
      kids.push_back((name && n.id == from) ? n.kids[0] : rec(n.kids[0]));
      if (n.kind == Kind::ERepl) kids.push_back(rec(n.kids[1]));
      std::string id2 = (name && n.id2 == from) ? to : n.id2;
      return make_node(n.kind, n.id, id2, std::move(kids));
    }
    case Kind::Named:
      return make_node(Kind::Named, (name && n.id == from) ? to : n.id, "", {rec(n.kids[0])});
    default:
      for (auto& k : n.kids) kids.push_back(rec(k));
      return make_node(n.kind, n.id, n.id2, std::move(kids));
  }
}

namespace {

FreshSupply local_supply(std::initializer_list<Object> objs) {
  FreshSupply fs;
  for (auto& o : objs) fs.reserve(o);
  return fs;
}

}  // namespace

Object var(const std::string& x) { return make_node(Kind::Var, x, "", {}); }
Object app(const Object& t, const Object& u) { return make_node(Kind::App, "", "", {t, u}); }
Object abs(const std::string& x, const Object& t) { return make_node(Kind::Abs, x, "", {t}); }
Object mu(const std::string& a, const Object& c) { return make_node(Kind::Mu, a, "", {c}); }
Object named(const std::string& a, const Object& t) { return make_node(Kind::Named, a, "", {t}); }

Object esub(const Object& t, const std::string& x, const Object& u, FreshSupply* fs) {
  if (!contains(u->fv, x)) return make_node(Kind::ESub, x, "", {t, u});
  FreshSupply local = local_supply({t, u});
  FreshSupply& supply = fs ? *fs : local;
  supply.reserve(t);
  supply.reserve(u);
  std::string y = supply.fresh(x);
  return make_node(Kind::ESub, y, "", {rename_fresh(t, x, y, false), u});
}

Object erepl(const Object& c, const std::string& a, const Object& s, const std::string& out,
             FreshSupply* fs) {
  if (!contains(s->fn, a) && a != out) return make_node(Kind::ERepl, a, out, {c, s});
  FreshSupply local = local_supply({c, s});
  FreshSupply& supply = fs ? *fs : local;
  supply.reserve(c);
  supply.reserve(s);
  supply.reserve(out);
  std::string b = supply.fresh(a);
  return make_node(Kind::ERepl, b, out, {rename_fresh(c, a, b, true), s});
}

Object eren(const Object& c, const std::string& a, const std::string& b, FreshSupply* fs) {
  if (a != b) return make_node(Kind::ERen, a, b, {c});
  FreshSupply local = local_supply({c});
  FreshSupply& supply = fs ? *fs : local;
  supply.reserve(c);
  std::string a2 = supply.fresh(a);
  return make_node(Kind::ERen, a2, b, {rename_fresh(c, a, a2, true)});
}

Object stack(std::vector<Object> items) {
  if (items.empty()) throw InvariantError("stacks are nonempty");
  return make_node(Kind::Stack, "", "", std::move(items));
}

Object stack_concat(const Object& s, const Object& s2) {
  std::vector<Object> items = s->kids;
  items.insert(items.end(), s2->kids.begin(), s2->kids.end());
  return stack(std::move(items));
}

int count_name(const Object& o, const std::string& a) {
  if (!contains(o->fn, a)) return 0;
  const Node& n = *o;
  int c = 0;
  switch (n.kind) {
    case Kind::Named:
      c = n.id == a ? 1 : 0;
      return c + count_name(n.kids[0], a);
    case Kind::Mu:
      return count_name(n.kids[0], a);
    case Kind::ERepl:
      return (n.id2 == a ? 1 : 0) + (n.id == a ? 0 : count_name(n.kids[0], a)) +
             count_name(n.kids[1], a);
    case Kind::ERen:
      return (n.id2 == a ? 1 : 0) + (n.id == a ? 0 : count_name(n.kids[0], a));
    default:
      for (auto& k : n.kids) c += count_name(k, a);
      return c;
  }
}

int count_var(const Object& o, const std::string& x) {
  if (!contains(o->fv, x)) return 0;
  const Node& n = *o;
  if (n.kind == Kind::Var) return 1;
  if (n.kind == Kind::ESub) return count_var(n.kids[0], x) + count_var(n.kids[1], x);
  int c = 0;
  for (auto& k : n.kids) c += count_var(k, x);
  return c;
}

std::set<std::string> identifiers(const Object& o) {
  std::set<std::string> out;
  std::function<void(const Object&)> go = [&](const Object& p) {
    if (!p->id.empty()) out.insert(p->id);
    if (!p->id2.empty()) out.insert(p->id2);
    for (auto& k : p->kids) go(k);
  };
  go(o);
  return out;
}

int Analysis::count(const std::string& a) const {
  auto it = name_count.find(a);
  return it == name_count.end() ? 0 : it->second;
}

Analysis analyze(const Object& o) {
  Analysis r;
  r.fv = o->fv;
  r.fn = o->fn;
  for (auto& a : o->fn) r.name_count[a] = count_name(o, a);
  return r;
}

bool is_lambda_mu(const Object& o) {
  if (o->kind == Kind::ESub || o->kind == Kind::ERepl || o->kind == Kind::ERen) return false;
  for (auto& k : o->kids)
    if (!is_lambda_mu(k)) return false;
  return true;
}

const Object& at(const Object& o, const Path& p) {
  const Object* cur = &o;
  for (int i : p) {
    if (i < 0 || static_cast<std::size_t>(i) >= (*cur)->kids.size())
      throw PreconditionError("invalid path " + path_string(p));
    cur = &(*cur)->kids[i];
  }
  return *cur;
}

namespace {

Object rebuild(const Object& o, std::vector<Object> kids, FreshSupply* fs) {
  const Node& n = *o;
  switch (n.kind) {
    case Kind::ESub:
      return esub(kids[0], n.id, kids[1], fs);
    case Kind::ERepl:
      return erepl(kids[0], n.id, kids[1], n.id2, fs);
    case Kind::ERen:
      return eren(kids[0], n.id, n.id2, fs);
    default:
      return make_node(n.kind, n.id, n.id2, std::move(kids));
  }
}

Object replace_rec(const Object& o, const Path& p, std::size_t i, const Object& sub,
                   FreshSupply* fs) {
  if (i == p.size()) return sub;
  std::vector<Object> kids = o->kids;
  kids.at(p[i]) = replace_rec(o->kids.at(p[i]), p, i + 1, sub, fs);
  return rebuild(o, std::move(kids), fs);
}

}  // namespace

Object replace_at(const Object& o, const Path& p, const Object& sub, FreshSupply* fs) {
  if (sort_of(at(o, p)) != sort_of(sub)) throw SortError("replace_at: sort mismatch");
  return replace_rec(o, p, 0, sub, fs);
}

std::string path_string(const Path& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// α-equivalence by canonical numbering of binders.

namespace {

struct KeyBuilder {
  std::string out;
  std::vector<std::pair<std::string, int>> vars;
  std::vector<std::pair<std::string, int>> names;
  int next = 0;

  static std::string lookup(const std::vector<std::pair<std::string, int>>& env,
                            const std::string& id, char freeTag, char boundTag) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == id) return boundTag + std::to_string(it->second);
    return freeTag + id;
  }
  std::string var(const std::string& x) const { return lookup(vars, x, '$', '#'); }
  std::string name(const std::string& a) const { return lookup(names, a, '@', '%'); }

  void go(const Object& o) {
    const Node& n = *o;
    switch (n.kind) {
      case Kind::Var:
        out += var(n.id);
        out += ' ';
        return;
      case Kind::App:
        out += "A(";
        go(n.kids[0]);
        go(n.kids[1]);
        out += ')';
        return;
      case Kind::Abs:
        out += "L(";
        vars.emplace_back(n.id, next++);
        go(n.kids[0]);
        vars.pop_back();
        out += ')';
        return;
      case Kind::ESub:
        out += "S(";
        go(n.kids[1]);
        vars.emplace_back(n.id, next++);
        go(n.kids[0]);
        vars.pop_back();
        out += ')';
        return;
      case Kind::Mu:
        out += "M(";
        names.emplace_back(n.id, next++);
        go(n.kids[0]);
        names.pop_back();
        out += ')';
        return;
      case Kind::Named:
        out += "N(" + name(n.id) + " ";
        go(n.kids[0]);
        out += ')';
        return;
      case Kind::ERepl:
        out += "R(" + name(n.id2) + " ";
        go(n.kids[1]);
        names.emplace_back(n.id, next++);
        go(n.kids[0]);
        names.pop_back();
        out += ')';
        return;
      case Kind::ERen:
        out += "W(" + name(n.id2) + " ";
        names.emplace_back(n.id, next++);
        go(n.kids[0]);
        names.pop_back();
        out += ')';
        return;
      case Kind::Stack:
        out += "K(";
        for (auto& k : n.kids) go(k);
        out += ')';
        return;
    }
  }
};

}  // namespace

std::string alpha_key(const Object& o) {
  KeyBuilder kb;
  kb.out.reserve(o->size * 4);
  kb.go(o);
  return kb.out;
}

bool alpha_equal(const Object& o, const Object& p) {
  if (o == p) return true;
  if (o->size != p->size || o->fv != p->fv || o->fn != p->fn) return false;
  return alpha_key(o) == alpha_key(p);
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

enum class Tok { Ident, Name, Mu, Lambda, Dot, LParen, RParen, LBrack, RBrack, Assign, Gt, Tilde, Comma, End };

struct Token {
  Tok type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> toks;
  std::size_t i = 0;
  auto ident_at = [&](std::size_t j) {
    std::size_t k = j;
    if (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) {
      ++k;
      while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_')) ++k;
    }
    return k;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t k = ident_at(i);
      std::string w = s.substr(i, k - i);
      toks.push_back({w == "mu" ? Tok::Mu : Tok::Ident, w, start});
      i = k;
    } else if (c == '\'') {
      std::size_t k = ident_at(i + 1);
      if (k == i + 1) throw SyntaxError(i + 1, "identifier after '");
      toks.push_back({Tok::Name, s.substr(i + 1, k - i - 1), start});
      i = k;
    } else if (c == ':' && i + 1 < s.size() && s[i + 1] == '=') {
      toks.push_back({Tok::Assign, ":=", start});
      i += 2;
    } else if (c == '~' && i + 1 < s.size() && s[i + 1] == '>') {
      toks.push_back({Tok::Tilde, "~>", start});
      i += 2;
    } else {
      Tok t;
      switch (c) {
        case '\\':
          t = Tok::Lambda;
          break;
        case '.':
          t = Tok::Dot;
          break;
        case '(':
          t = Tok::LParen;
          break;
        case ')':
          t = Tok::RParen;
          break;
        case '[':
          t = Tok::LBrack;
          break;
        case ']':
          t = Tok::RBrack;
          break;
        case '>':
          t = Tok::Gt;
          break;
        case ',':
          t = Tok::Comma;
          break;
        default:
          throw SyntaxError(i, "token");
      }
      toks.push_back({t, std::string(1, c), start});
      ++i;
    }
  }
  toks.push_back({Tok::End, "", s.size()});
  return toks;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Object run(Sort sort) {
    Object o;
    switch (sort) {
      case Sort::Term:
        o = term();
        break;
      case Sort::Command:
        o = command();
        break;
      case Sort::Stack:
        o = stack_();
        break;
    }
    expect(Tok::End, "end of input");
    return o;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  Token expect(Tok t, const char* what) {
    if (peek().type != t) throw SyntaxError(peek().pos, what);
    return toks_[i_++];
  }
  bool starts_atom() const {
    Tok t = peek().type;
    return t == Tok::Ident || t == Tok::Lambda || t == Tok::Mu || t == Tok::LParen;
  }

  Object term() {
    Object t = atom();
    while (starts_atom()) t = app(t, atom());
    return t;
  }

  Object atom() {
    Object t;
    const Token& tk = peek();
    switch (tk.type) {
      case Tok::Ident:
        ++i_;
        t = var(tk.text);
        break;
      case Tok::Lambda: {
        ++i_;
        std::string x = expect(Tok::Ident, "variable").text;
        expect(Tok::Dot, "'.'");
        t = abs(x, term());
        break;
      }
      case Tok::Mu: {
        ++i_;
        std::string a = expect(Tok::Name, "name").text;
        expect(Tok::Dot, "'.'");
        t = mu(a, command());
        break;
      }
      case Tok::LParen:
        ++i_;
        t = term();
        expect(Tok::RParen, "')'");
        break;
      default:
        throw SyntaxError(tk.pos, "term");
    }
    while (peek().type == Tok::LBrack && peek(1).type == Tok::Ident && peek(2).type == Tok::Assign) {
      std::size_t pos = peek().pos;
      i_ += 1;
      std::string x = expect(Tok::Ident, "variable").text;
      expect(Tok::Assign, "':='");
      Object u = term();
      expect(Tok::RBrack, "']'");
      if (contains(u->fv, x))
        throw InvariantError("explicit substitution at " + std::to_string(pos) + " binds " + x +
                             " which is free in its argument");
      t = make_node(Kind::ESub, x, "", {t, u});
    }
    return t;
  }

  Object command() {
    Object c;
    if (peek().type == Tok::LBrack) {
      ++i_;
      std::string a = expect(Tok::Name, "name").text;
      expect(Tok::RBrack, "']'");
      return named(a, term());
    }
    if (peek().type != Tok::LParen) throw SyntaxError(peek().pos, "command");
    ++i_;
    c = command();
    expect(Tok::RParen, "')'");
    while (peek().type == Tok::LBrack) {
      std::size_t pos = peek().pos;
      ++i_;
      std::string a = expect(Tok::Name, "name").text;
      if (peek().type == Tok::Tilde) {
        ++i_;
        std::string b = expect(Tok::Name, "name").text;
        expect(Tok::RBrack, "']'");
        if (a == b)
          throw InvariantError("explicit renaming at " + std::to_string(pos) + " maps a name to itself");
        c = make_node(Kind::ERen, a, b, {c});
      } else {
        expect(Tok::Assign, "':=' or '~>'");
        Object s = stack_();
        expect(Tok::Gt, "'>'");
        std::string out = expect(Tok::Name, "name").text;
        expect(Tok::RBrack, "']'");
        if (contains(s->fn, a) || a == out)
          throw InvariantError("explicit replacement at " + std::to_string(pos) + " binds '" + a +
                               " which occurs in its stack or output");
        c = make_node(Kind::ERepl, a, out, {c, s});
      }
    }
    return c;
  }

  Object stack_() {
    std::vector<Object> items{term()};
    while (peek().type == Tok::Comma) {
      ++i_;
      items.push_back(term());
    }
    return stack(std::move(items));
  }
};

}  // namespace

Object parse(const std::string& text, Sort sort) {
  try {
    return Parser(text).run(sort);
  } catch (const SyntaxError&) {
    for (Sort other : {Sort::Term, Sort::Command, Sort::Stack}) {
      if (other == sort) continue;
      try {
        Parser(text).run(other);
      } catch (const LmError&) {
        continue;
      }
      throw SortError(std::string("input is a ") + sort_name(other) + ", not a " + sort_name(sort));
    }
    throw;
  }
}

Object parse_any(const std::string& text) {
  for (Sort s : {Sort::Term, Sort::Command}) {
    try {
      return Parser(text).run(s);
    } catch (const SyntaxError&) {
    }
  }
  return Parser(text).run(Sort::Stack);
}

// ---------------------------------------------------------------------------
// Rendering with minimal parentheses.

namespace {

// Tail: nothing follows. Fun: an argument follows. Atom: must be atomic.
// TailAtom: atomic, but a trailing binder is allowed.
enum class Pos { Tail, Fun, Atom, TailAtom };

void render_command(const Object& o, std::string& out);

void render_term(const Object& o, Pos pos, std::string& out) {
  const Node& n = *o;
  auto paren = [&](auto&& body) {
    out += '(';
    body();
    out += ')';
  };
  switch (n.kind) {
    case Kind::Var:
      out += n.id;
      return;
    case Kind::App: {
      auto body = [&](Pos argPos) {
        render_term(n.kids[0], Pos::Fun, out);
        out += ' ';
        render_term(n.kids[1], argPos, out);
      };
      if (pos == Pos::Atom || pos == Pos::TailAtom)
        paren([&] { body(Pos::TailAtom); });
      else
        body(pos == Pos::Tail ? Pos::TailAtom : Pos::Atom);
      return;
    }
    case Kind::Abs:
    case Kind::Mu: {
      auto body = [&] {
        if (n.kind == Kind::Abs) {
          out += "\\" + n.id + ". ";
          render_term(n.kids[0], Pos::Tail, out);
        } else {
          out += "mu '" + n.id + ". ";
          render_command(n.kids[0], out);
        }
      };
      if (pos == Pos::Tail || pos == Pos::TailAtom)
        body();
      else
        paren(body);
      return;
    }
    case Kind::ESub:
      render_term(n.kids[0], Pos::Atom, out);
      out += "[" + n.id + " := ";
      render_term(n.kids[1], Pos::Tail, out);
      out += "]";
      return;
    default:
      throw PreconditionError("render_term: not a term");
  }
}

void render_stack(const Object& s, std::string& out) {
  for (std::size_t i = 0; i < s->kids.size(); ++i) {
    if (i) out += ", ";
    render_term(s->kids[i], Pos::Tail, out);
  }
}

void render_postfixed(const Object& o, std::string& out) {
  const Node& n = *o;
  if (n.kind == Kind::Named) {
    out += "(";
    render_command(o, out);
    out += ")";
    return;
  }
  render_postfixed(n.kids[0], out);
  if (n.kind == Kind::ERepl) {
    out += "['" + n.id + " := ";
    render_stack(n.kids[1], out);
    out += " > '" + n.id2 + "]";
  } else {
    out += "['" + n.id + " ~> '" + n.id2 + "]";
  }
}

void render_command(const Object& o, std::string& out) {
  const Node& n = *o;
  if (n.kind == Kind::Named) {
    out += "['" + n.id + "] ";
    render_term(n.kids[0], Pos::Tail, out);
  } else {
    render_postfixed(o, out);
  }
}

}  // namespace

std::string render(const Object& o) {
  std::string out;
  switch (sort_of(o)) {
    case Sort::Term:
      render_term(o, Pos::Tail, out);
      break;
    case Sort::Command:
      render_command(o, out);
      break;
    case Sort::Stack:
      render_stack(o, out);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

using nlohmann::json;

json vj(const std::string& x) { return json{{"var", x}}; }
json nj(const std::string& a) { return json{{"name", a}}; }

json to_j(const Object& o) {
  const Node& n = *o;
  json j;
  j["k"] = kind_name(n.kind);
  switch (n.kind) {
    case Kind::Var:
      j["x"] = vj(n.id);
      break;
    case Kind::App:
      j["fun"] = to_j(n.kids[0]);
      j["arg"] = to_j(n.kids[1]);
      break;
    case Kind::Abs:
      j["x"] = vj(n.id);
      j["body"] = to_j(n.kids[0]);
      break;
    case Kind::Mu:
      j["a"] = nj(n.id);
      j["body"] = to_j(n.kids[0]);
      break;
    case Kind::ESub:
      j["body"] = to_j(n.kids[0]);
      j["x"] = vj(n.id);
      j["arg"] = to_j(n.kids[1]);
      break;
    case Kind::Named:
      j["a"] = nj(n.id);
      j["t"] = to_j(n.kids[0]);
      break;
    case Kind::ERepl:
      j["body"] = to_j(n.kids[0]);
      j["a"] = nj(n.id);
      j["s"] = to_j(n.kids[1]);
      j["out"] = nj(n.id2);
      break;
    case Kind::ERen:
      j["body"] = to_j(n.kids[0]);
      j["a"] = nj(n.id);
      j["b"] = nj(n.id2);
      break;
    case Kind::Stack:
      j["items"] = json::array();
      for (auto& k : n.kids) j["items"].push_back(to_j(k));
      break;
  }
  return j;
}

Object from_j(const json& j) {
  std::string k = j.at("k").get<std::string>();
  auto v = [&](const char* f) { return j.at(f).at("var").get<std::string>(); };
  auto nm = [&](const char* f) { return j.at(f).at("name").get<std::string>(); };
  if (k == "Var") return var(v("x"));
  if (k == "App") return app(from_j(j.at("fun")), from_j(j.at("arg")));
  if (k == "Abs") return abs(v("x"), from_j(j.at("body")));
  if (k == "Mu") return mu(nm("a"), from_j(j.at("body")));
  if (k == "ESub") return esub(from_j(j.at("body")), v("x"), from_j(j.at("arg")));
  if (k == "Named") return named(nm("a"), from_j(j.at("t")));
  if (k == "ERepl") return erepl(from_j(j.at("body")), nm("a"), from_j(j.at("s")), nm("out"));
  if (k == "ERen") return eren(from_j(j.at("body")), nm("a"), nm("b"));
  if (k == "Stack") {
    std::vector<Object> items;
    for (auto& e : j.at("items")) items.push_back(from_j(e));
    return stack(std::move(items));
  }
  throw SyntaxError(0, "known constructor");
}

}  // namespace

std::string to_json(const Object& o) { return to_j(o).dump(); }

Object from_json(const std::string& text) {
  try {
    return from_j(json::parse(text));
  } catch (const json::exception& e) {
    throw SyntaxError(0, std::string("JSON object (") + e.what() + ")");
  }
}

}  // namespace lm
