#include "lm/reduction.hpp"

#include <functional>

#include "json.hpp"
#include "lm/meta.hpp"

namespace lm {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::dB:
      return "dB";
    case Rule::S:
      return "S";
    case Rule::dM:
      return "dM";
    case Rule::N:
      return "N";
    case Rule::C:
      return "C";
    case Rule::W:
      return "W";
    case Rule::Nnl:
      return "Nnl";
    case Rule::Cnl:
      return "Cnl";
    case Rule::Wnl:
      return "Wnl";
    case Rule::Rnl:
      return "Rnl";
    case Rule::Beta:
      return "Beta";
    case Rule::MuLM:
      return "MuLM";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
  for (Rule r : {Rule::dB, Rule::S, Rule::dM, Rule::N, Rule::C, Rule::W, Rule::Nnl, Rule::Cnl, Rule::Wnl,
                 Rule::Rnl, Rule::Beta, Rule::MuLM})
    if (s == rule_name(r)) return r;
  return std::nullopt;
}

bool is_plain(Rule r) { return plain_rules().count(r) > 0; }
bool is_meaningful(Rule r) { return meaningful_rules().count(r) > 0; }

const RuleSet& plain_rules() {
  static const RuleSet s{Rule::dB, Rule::dM, Rule::N, Rule::C, Rule::W};
  return s;
}
const RuleSet& meaningful_rules() {
  static const RuleSet s{Rule::S, Rule::Rnl, Rule::Nnl, Rule::Cnl, Rule::Wnl};
  return s;
}
const RuleSet& all_rules() {
  static const RuleSet s{Rule::dB, Rule::S, Rule::dM, Rule::N, Rule::C, Rule::W,
                         Rule::Nnl, Rule::Cnl, Rule::Wnl, Rule::Rnl};
  return s;
}

LinearityClass classify_replacement(const Object& c, const std::string& a) {
  LinearityClass r;
  if (count_name(c, a) != 1) return r;
  bool linear = true;
  const Object* cur = &c;
  for (;;) {
    const Node& n = **cur;
    if (n.kind == Kind::Named && n.id == a) {
      r.occurrence = LinearityClass::Occurrence::Name;
      break;
    }
    if (n.kind == Kind::ERepl && n.id2 == a) {
      r.occurrence = LinearityClass::Occurrence::Comp;
      break;
    }
    if (n.kind == Kind::ERen && n.id2 == a) {
      r.occurrence = LinearityClass::Occurrence::Swap;
      break;
    }
    int next = -1;
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      bool shadowed = i == 0 && n.id == a &&
                      (n.kind == Kind::Mu || n.kind == Kind::ERepl || n.kind == Kind::ERen);
      if (!shadowed && contains(n.kids[i]->fn, a)) {
        next = static_cast<int>(i);
        break;
      }
    }
    if (next < 0) return LinearityClass{};
    if (n.kind == Kind::Stack || (next == 1 && (n.kind == Kind::App || n.kind == Kind::ESub ||
                                                n.kind == Kind::ERepl)))
      linear = false;
    r.focus.push_back(next);
    cur = &n.kids[next];
  }
  r.shape = linear ? LinearityClass::Shape::Linear : LinearityClass::Shape::NonLinear;
  return r;
}

namespace {

struct LocalResult {
  Rule rule;
  Object result;
  std::vector<std::string> fresh;
};

const Node* spine_head(const Object& f) {
  const Object* cur = &f;
  while ((*cur)->kind == Kind::ESub) cur = &(*cur)->kids[0];
  return cur->get();
}

Object rebuild_spine(const Object& f, const Object& u, FreshSupply& fs,
                     const std::function<Object(const Object&)>& at_head) {
  if (f->kind != Kind::ESub) return at_head(f);
  std::string y = f->id;
  Object body = f->kids[0];
  if (contains(u->fv, y)) {
    std::string y2 = fs.fresh(y);
    body = rename_fresh(body, y, y2, false);
    y = y2;
  }
  return esub(rebuild_spine(body, u, fs, at_head), y, f->kids[1], &fs);
}

// The rule whose left-hand side matches at this node, if requested.
std::optional<Rule> match(const Object& x, const RuleSet& rules) {
  const Node& n = *x;
  switch (n.kind) {
    case Kind::App: {
      const Node* h = spine_head(n.kids[0]);
      if (h->kind == Kind::Abs) {
        if (rules.count(Rule::Beta) && n.kids[0]->kind == Kind::Abs) return Rule::Beta;
        if (rules.count(Rule::dB)) return Rule::dB;
      }
      if (h->kind == Kind::Mu) {
        if (rules.count(Rule::MuLM) && n.kids[0]->kind == Kind::Mu) return Rule::MuLM;
        if (rules.count(Rule::dM)) return Rule::dM;
      }
      return std::nullopt;
    }
    case Kind::ESub:
      if (rules.count(Rule::S)) return Rule::S;
      return std::nullopt;
    case Kind::ERepl: {
      LinearityClass cls = classify_replacement(n.kids[0], n.id);
      Rule r = Rule::Rnl;
      using Occ = LinearityClass::Occurrence;
      if (cls.shape != LinearityClass::Shape::NonLinearCount) {
        bool lin = cls.shape == LinearityClass::Shape::Linear;
        switch (cls.occurrence) {
          case Occ::Name:
            r = lin ? Rule::N : Rule::Nnl;
            break;
          case Occ::Comp:
            r = lin ? Rule::C : Rule::Cnl;
            break;
          case Occ::Swap:
            r = lin ? Rule::W : Rule::Wnl;
            break;
        }
      }
      if (rules.count(r)) return r;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

LocalResult contract(const Object& x, Rule rule, FreshSupply& fs) {
  const Node& n = *x;
  LocalResult res{rule, nullptr, {}};
  switch (rule) {
    case Rule::dB:
      res.result = rebuild_spine(n.kids[0], n.kids[1], fs, [&](const Object& h) {
        return esub(h->kids[0], h->id, n.kids[1], &fs);
      });
      return res;
    case Rule::dM:
      res.result = rebuild_spine(n.kids[0], n.kids[1], fs, [&](const Object& h) {
        std::string a2 = fs.fresh(h->id);
        res.fresh.push_back(a2);
        return mu(a2, erepl(h->kids[0], h->id, stack({n.kids[1]}), a2, &fs));
      });
      return res;
    case Rule::Beta:
      res.result = substitute(n.kids[0]->kids[0], n.kids[0]->id, n.kids[1], &fs);
      return res;
    case Rule::MuLM: {
      const Object& m = n.kids[0];
      std::string a2 = fs.fresh(m->id);
      res.fresh.push_back(a2);
      res.result = mu(a2, replace(m->kids[0], m->id, stack({n.kids[1]}), a2, &fs));
      return res;
    }
    case Rule::S:
      res.result = substitute(n.kids[0], n.id, n.kids[1], &fs);
      return res;
    case Rule::Rnl:
      res.result = replace(n.kids[0], n.id, n.kids[1], n.id2, &fs);
      return res;
    default:
      break;
  }
  // N, C, W and their non-linear variants: rewrite the unique occurrence in place.
  const std::string& a = n.id;
  const std::string& out = n.id2;
  const Object& s = n.kids[1];
  IdSet avoidNames = s->fn;
  if (!contains(avoidNames, out)) {
    avoidNames.push_back(out);
    std::sort(avoidNames.begin(), avoidNames.end());
  }
  Object c = refresh_binders(n.kids[0], s->fv, avoidNames, fs);
  LinearityClass cls = classify_replacement(c, a);
  const Object& occ = at(c, cls.focus);
  Object plug;
  switch (rule) {
    case Rule::N:
    case Rule::Nnl:
      plug = named(out, apply_stack(occ->kids[0], s));
      break;
    case Rule::C:
    case Rule::Cnl:
      plug = erepl(occ->kids[0], occ->id, stack_concat(occ->kids[1], s), out, &fs);
      break;
    case Rule::W:
      plug = eren(erepl(occ->kids[0], occ->id, s, a, &fs), a, out, &fs);
      break;
    case Rule::Wnl: {
      std::string g = fs.fresh(a);
      res.fresh.push_back(g);
      plug = eren(erepl(occ->kids[0], occ->id, s, g, &fs), g, out, &fs);
      break;
    }
    default:
      throw PreconditionError("contract: unexpected rule");
  }
  res.result = replace_at(c, cls.focus, plug, &fs);
  return res;
}

void collect(const Object& root, const Object& x, Path& path, const RuleSet& rules,
             std::vector<Step>& out, bool first_only) {
  if (first_only && !out.empty()) return;
  if (auto r = match(x, rules)) {
    FreshSupply fs(root);
    LocalResult lr = contract(x, *r, fs);
    out.push_back(Step{*r, path, root, replace_at(root, path, lr.result, &fs), lr.fresh});
    if (first_only) return;
  }
  for (std::size_t i = 0; i < x->kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect(root, x->kids[i], path, rules, out, first_only);
    path.pop_back();
  }
}

bool any_match(const Object& x, const RuleSet& rules) {
  if (match(x, rules)) return true;
  for (auto& k : x->kids)
    if (any_match(k, rules)) return true;
  return false;
}

}  // namespace

std::vector<Step> steps(const Object& o, const RuleSet& rules) {
  std::vector<Step> out;
  Path p;
  collect(o, o, p, rules, out, false);
  return out;
}

std::optional<Step> first_step(const Object& o, const RuleSet& rules) {
  std::vector<Step> out;
  Path p;
  collect(o, o, p, rules, out, true);
  if (out.empty()) return std::nullopt;
  return out.front();
}

bool has_redex(const Object& o, const RuleSet& rules) { return any_match(o, rules); }
bool is_plain_form(const Object& o) { return !any_match(o, plain_rules()); }

Object plain_normal_form(const Object& o) {
  Object cur = o;
  while (auto s = first_step(cur, plain_rules())) cur = s->after;
  return cur;
}

Object plain_normal_form_random(const Object& o, std::mt19937_64& rng) {
  Object cur = o;
  for (;;) {
    auto ss = steps(cur, plain_rules());
    if (ss.empty()) return cur;
    std::uniform_int_distribution<std::size_t> pick(0, ss.size() - 1);
    cur = ss[pick(rng)].after;
  }
}

std::vector<Step> meaningful_steps(const Object& o) {
  if (!is_plain_form(o)) throw NotPlainForm("meaningful_steps: input has a plain redex");
  auto ss = steps(o, meaningful_rules());
  for (auto& s : ss) s.after = plain_normal_form(s.after);
  return ss;
}

std::vector<Step> lmu_steps(const Object& o) {
  if (!is_lambda_mu(o)) throw NotLambdaMu("lmu_steps: explicit operators present");
  return steps(o, RuleSet{Rule::Beta, Rule::MuLM});
}

Weight plain_weight(const Object& o) {
  const Node& n = *o;
  switch (n.kind) {
    case Kind::Var:
      return 3;
    case Kind::App:
      return plain_weight(n.kids[0]) * plain_weight(n.kids[1]);
    case Kind::Abs:
    case Kind::Named:
      return plain_weight(n.kids[0]);
    case Kind::Mu:
    case Kind::ERen:
      return plain_weight(n.kids[0]) + 1;
    case Kind::ESub:
      return plain_weight(n.kids[0]) + plain_weight(n.kids[1]);
    case Kind::ERepl:
      return plain_weight(n.kids[0]) * plain_weight(n.kids[1]) + 1;
    case Kind::Stack: {
      Weight w = 1;
      for (auto& k : n.kids) w *= plain_weight(k);
      return w;
    }
  }
  return 0;
}

std::string step_to_json(const Step& s) {
  nlohmann::json j;
  j["rule"] = rule_name(s.rule);
  j["path"] = s.path;
  j["before"] = render(s.before);
  j["after"] = render(s.after);
  j["fresh"] = s.fresh;
  return j.dump();
}

}  // namespace lm
