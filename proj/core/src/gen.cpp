#include "lm/gen.hpp"

#include <algorithm>

#include "lm/reduction.hpp"
#include "lm/typing.hpp"

namespace lm {

namespace {

struct Builder {
  const GenConfig& cfg;
  std::mt19937_64& rng;
  std::vector<std::string> vars;   // in scope
  std::vector<std::string> names;  // in scope

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  bool coin(int num, int den) { return static_cast<int>(below(den)) < num; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::string binder(const std::vector<std::string>& pool, const char* extra) {
    if (coin(1, 2) && !pool.empty()) return pick(pool);
    return std::string(extra) + std::to_string(below(2));
  }

  std::pair<std::size_t, std::size_t> split(std::size_t n, std::size_t minA, std::size_t minB) {
    std::size_t a = minA + below(n - minA - minB + 1);
    return {a, n - a};
  }

  Object term(std::size_t n) {
    if (n <= 1 || vars.empty()) return var(vars.empty() ? "x" : pick(vars));
    const GenWeights& w = cfg.weights;
    std::vector<std::pair<int, int>> choice{{1, w.abs}};
    if (n >= 3) choice.insert(choice.end(), {{2, w.app}, {3, w.mu}, {4, w.esub}});
    if (n >= 4) choice.push_back({5, w.redex});
    int total = 0;
    for (auto& c : choice) total += c.second;
    int r = static_cast<int>(below(total));
    int k = 0;
    for (auto& c : choice) {
      if (r < c.second) {
        k = c.first;
        break;
      }
      r -= c.second;
    }
    switch (k) {
      case 1: {
        std::string x = binder(cfg.freeVars, "v");
        vars.push_back(x);
        Object body = term(n - 1);
        vars.pop_back();
        return abs(x, body);
      }
      case 2: {
        auto [a, b] = split(n - 1, 1, 1);
        Object f = term(a);
        return app(f, term(b));
      }
      case 3: {
        std::string a = binder(cfg.freeNames, "c");
        names.push_back(a);
        Object body = command(n - 1);
        names.pop_back();
        return mu(a, body);
      }
      case 4: {
        auto [a, b] = split(n - 1, 1, 1);
        std::string x = binder(cfg.freeVars, "v");
        Object u = term(b);
        vars.push_back(x);
        Object t = term(a);
        vars.pop_back();
        return esub(t, x, u);
      }
      case 5: {
        auto [a, b] = split(n - 1, 2, 1);
        Object f = coin(1, 2) ? term(1) : nullptr;
        if (!f || f->kind == Kind::Var) {
          std::string x = binder(cfg.freeVars, "v");
          if (coin(1, 2) && a >= 3) {
            std::string c = binder(cfg.freeNames, "c");
            names.push_back(c);
            f = mu(c, command(a - 1));
            names.pop_back();
          } else {
            vars.push_back(x);
            f = abs(x, term(a - 1));
            vars.pop_back();
          }
        }
        return app(f, term(b));
      }
      default:
        return var(pick(vars));
    }
  }

  // Commands have size at least 2.
  Object command(std::size_t n) {
    const GenWeights& w = cfg.weights;
    std::string out = names.empty() ? "a" : pick(names);
    int total = w.named + (n >= 4 ? w.erepl : 0) + (n >= 3 ? w.eren : 0);
    int r = static_cast<int>(below(total));
    if (n < 3 || names.empty() || r < w.named) return named(out, term(n < 2 ? 1 : n - 1));
    r -= w.named;
    std::string a = binder(cfg.freeNames, "c");
    if (n >= 4 && r < w.erepl) {
      auto [cs, ss] = split(n - 1, 2, 1);
      Object s = stack_of(ss);
      names.push_back(a);
      Object c = command(cs);
      names.pop_back();
      return erepl(c, a, s, out);
    }
    names.push_back(a);
    Object c = command(n - 1);
    names.pop_back();
    return eren(c, a, out);
  }

  // Stacks are a list of terms; sizes count the items only.
  Object stack_of(std::size_t n) {
    std::vector<Object> items;
    while (n > 0) {
      std::size_t take = items.size() >= 2 || n <= 2 || coin(2, 3) ? n : 1 + below(n - 1);
      items.push_back(term(take));
      n -= take;
    }
    return stack(std::move(items));
  }

  Object of_sort(Sort s, std::size_t n) {
    switch (s) {
      case Sort::Term:
        return term(n);
      case Sort::Command:
        return command(std::max<std::size_t>(n, 2));
      case Sort::Stack:
        return stack_of(n);
    }
    return term(n);
  }
};

}  // namespace

Object gen_object(const GenConfig& cfg, Sort sort, std::mt19937_64& rng) {
  if (cfg.maxSize < 1) throw PreconditionError("gen_object: maxSize must be at least 1");
  Object best;
  for (int attempt = 0; attempt < cfg.retries; ++attempt) {
    Builder b{cfg, rng, cfg.freeVars, cfg.freeNames};
    std::size_t n = 1 + b.below(cfg.maxSize);
    Object o = b.of_sort(sort, n);
    if (cfg.requirePlain) o = plain_normal_form(o);
    if (cfg.requireTypable && !try_infer(o)) continue;
    if (o->size <= cfg.maxSize) return o;
    if (!best || o->size < best->size) best = o;
  }
  if (cfg.requireTypable || !best) throw GenerationExhausted("gen_object: no object met the requirements");
  return best;
}

Object gen_object(const GenConfig& cfg, Sort sort) {
  std::mt19937_64 rng(cfg.seed);
  return gen_object(cfg, sort, rng);
}

EquivPair gen_equiv_pair(const GenConfig& cfg, int k, std::mt19937_64& rng) {
  GenConfig c = cfg;
  c.requirePlain = true;
  Sort sort = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? Sort::Command : Sort::Term;
  Object o = gen_object(c, sort, rng);
  EquivPair out{o, o, {}};
  for (int i = 0; i < k; ++i) {
    std::vector<Move> ms = moves(out.p, Family::Sigma, true);
    if (ms.empty()) break;
    std::vector<Move> shrinking;
    for (auto& m : ms)
      if (!m.expansion) shrinking.push_back(m);
    // Expansions are taken a third of the time so pairs stay small.
    bool grow = shrinking.empty() || std::uniform_int_distribution<int>(0, 2)(rng) == 0;
    const std::vector<Move>& pool = grow ? ms : shrinking;
    const Move& m = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    out.witness.push_back(WitnessStep{m.axiom, m.forward, m.path, out.p, m.result});
    out.p = m.result;
  }
  return out;
}

EquivPair gen_equiv_pair(const GenConfig& cfg, int k) {
  std::mt19937_64 rng(cfg.seed);
  return gen_equiv_pair(cfg, k, rng);
}

namespace {

void same_sort_descendants(const Object& o, Sort s, std::vector<Object>& out, bool self) {
  if (!self && sort_of(o) == s) out.push_back(o);
  for (auto& kid : o->kids) same_sort_descendants(kid, s, out, false);
}

}  // namespace

std::vector<Object> shrink_candidates(const Object& o) {
  std::vector<Object> out;
  Sort s = sort_of(o);
  same_sort_descendants(o, s, out, true);
  if (s == Sort::Term && o->kind != Kind::Var) out.push_back(var(o->fv.empty() ? "x" : o->fv.front()));
  if (o->kind == Kind::Stack && o->kids.size() > 1)
    for (std::size_t i = 0; i < o->kids.size(); ++i) {
      std::vector<Object> items = o->kids;
      items.erase(items.begin() + static_cast<long>(i));
      out.push_back(stack(std::move(items)));
    }
  for (std::size_t i = 0; i < o->kids.size(); ++i)
    for (auto& c : shrink_candidates(o->kids[i])) {
      FreshSupply fs(o);
      fs.reserve(c);
      out.push_back(replace_at(o, Path{static_cast<int>(i)}, c, &fs));
    }
  std::stable_sort(out.begin(), out.end(), [](const Object& a, const Object& b) { return a->size < b->size; });
  return out;
}

Object shrink(const Object& o, const std::function<bool(const Object&)>& fails) {
  Object cur = o;
  for (bool progress = true; progress;) {
    progress = false;
    for (auto& c : shrink_candidates(cur)) {
      if (c->size >= cur->size) continue;
      if (fails(c)) {
        cur = c;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

}  // namespace lm
