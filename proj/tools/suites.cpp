#include "suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "lm/equivalence.hpp"
#include "lm/gen.hpp"
#include "lm/proofnets.hpp"
#include "lm/reduction.hpp"
#include "lm/typing.hpp"

namespace lm::suites {

namespace {

struct Outcome {
  enum class Kind { Pass, Fail, Unknown } kind = Kind::Pass;
  std::size_t checks = 0;
  std::string message;
  std::vector<Object> inputs;
  std::string tag;
  // Re-evaluates the failing predicate on a candidate for shrinking.
  std::function<bool(const Object&)> still_fails;
};

using CaseFn = std::function<Outcome(std::mt19937_64&, std::size_t)>;

std::mt19937_64 case_rng(std::uint64_t seed, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

Result drive(const std::string& name, const Options& opt, const CaseFn& fn) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Outcome> outs(opt.n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i; (i = next++) < opt.n;) {
      auto rng = case_rng(opt.seed, i);
      try {
        outs[i] = fn(rng, i);
      } catch (const std::exception& e) {
        outs[i].kind = Outcome::Kind::Fail;
        outs[i].message = std::string("exception: ") + e.what();
      }
    }
  };
  unsigned w = std::max(1U, opt.workers);
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < w; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  Result r;
  r.suite = name;
  r.cases = opt.n;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    Outcome& o = outs[i];
    r.checks += o.checks;
    if (!o.tag.empty()) ++r.tally[o.tag];
    if (o.kind == Outcome::Kind::Unknown) ++r.unknown;
    if (o.kind != Outcome::Kind::Fail) continue;
    ++r.failures;
    Failure f{i, o.message, {}, {}};
    for (auto& in : o.inputs) f.input += render(in) + "\n";
    if (o.still_fails && o.inputs.size() == 1) f.shrunk = render(shrink(o.inputs[0], o.still_fails));
    r.failing.push_back(std::move(f));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Sort random_sort(std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? Sort::Command : Sort::Term;
}

Outcome fail(std::string msg, std::vector<Object> in, std::function<bool(const Object&)> again = {}) {
  Outcome o;
  o.kind = Outcome::Kind::Fail;
  o.message = std::move(msg);
  o.inputs = std::move(in);
  o.still_fails = std::move(again);
  return o;
}

// ---- weight ----------------------------------------------------------------

std::optional<std::string> weight_violation(const Object& o, std::size_t* checks) {
  Weight w = plain_weight(o);
  for (const Step& s : steps(o, plain_rules())) {
    if (checks) ++*checks;
    if (!(plain_weight(s.after) < w))
      return std::string(rule_name(s.rule)) + " step at " + path_string(s.path) + " does not decrease the weight";
  }
  return std::nullopt;
}

Outcome weight_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 40;
  Object o = gen_object(c, random_sort(rng), rng);
  Outcome out;
  if (auto v = weight_violation(o, &out.checks))
    return fail(*v, {o}, [](const Object& x) { return weight_violation(x, nullptr).has_value(); });
  return out;
}

// ---- confluence ------------------------------------------------------------

bool diverges(const Object& o, std::uint64_t seed, int runs) {
  std::mt19937_64 rng(seed);
  Object first = plain_normal_form_random(o, rng);
  for (int i = 1; i < runs; ++i)
    if (!alpha_equal(first, plain_normal_form_random(o, rng))) return true;
  return false;
}

Outcome confluence_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 25;
  Object o = gen_object(c, random_sort(rng), rng);
  std::uint64_t seed = rng();
  Outcome out;
  out.checks = 20;
  if (diverges(o, seed, 20))
    return fail("randomized plain strategies disagree", {o}, [seed](const Object& x) { return diverges(x, seed, 20); });
  return out;
}

// ---- bisimulation ----------------------------------------------------------

Outcome bisim_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 25;
  int k = std::uniform_int_distribution<int>(1, 3)(rng);
  EquivPair e = gen_equiv_pair(c, k, rng);
  Outcome out;
  out.checks = 1;
  if (!replay(e.o, e.p, e.witness, Family::Sigma)) return fail("generated witness does not replay", {e.o, e.p});
  BisimReport r = bisim_diagram(e.o, e.p, 50000, 1, false);
  out.checks += r.entries.size();
  if (r.unknown && r.failure.empty()) {
    out.kind = Outcome::Kind::Unknown;
    return out;
  }
  if (r.unknown) {
    out.kind = Outcome::Kind::Unknown;
    out.message = r.failure;
    return out;
  }
  if (!r.ok) return fail(r.failure, {e.o, e.p});
  return out;
}

// ---- subject reduction -----------------------------------------------------

std::optional<std::string> subject_violation(const Object& o, std::size_t* checks) {
  if (!try_infer(o)) return std::nullopt;
  for (const Step& s : steps(o, all_rules())) {
    if (s.rule == Rule::Beta || s.rule == Rule::MuLM) continue;
    if (checks) ++*checks;
    if (!subject_step_check(o, s))
      return std::string(rule_name(s.rule)) + " reduct at " + path_string(s.path) + " loses the typing";
    if (is_plain(s.rule) && !subject_expansion_check(s))
      return std::string(rule_name(s.rule)) + " expansion at " + path_string(s.path) + " loses the typing";
  }
  return std::nullopt;
}

Outcome subject_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 20;
  c.requireTypable = true;
  Object o = gen_object(c, random_sort(rng), rng);
  Outcome out;
  if (auto v = subject_violation(o, &out.checks))
    return fail(*v, {o}, [](const Object& x) { return subject_violation(x, nullptr).has_value(); });
  return out;
}

// ---- proof-net simulation --------------------------------------------------

Net normal_net(const Object& o) { return canonical_mnf(translate_object(o)); }

std::optional<std::string> simulation_violation(const Object& o, std::size_t* checks) {
  if (!try_infer(o)) return std::nullopt;
  auto sim = [&](const Object& src, const Step& s) -> std::optional<std::string> {
    if (checks) ++*checks;
    SimReport r = simulate_check(src, s);
    if (!r.ok) return std::string(rule_name(s.rule)) + " at " + path_string(s.path) + ": " + r.message;
    return std::nullopt;
  };
  for (const Step& s : steps(o, plain_rules()))
    if (auto v = sim(o, s)) return v;
  Object q = plain_normal_form(o);
  for (const Step& s : meaningful_steps(q))
    if (auto v = sim(q, s)) return v;
  Net n = normal_net(o);
  if (!ppn_equiv(n, normal_net(plain_normal_form(o)))) return std::string("net changes under fcan");
  Object e = fexp(o);
  if (try_infer(e) && !ppn_equiv(n, normal_net(e))) return std::string("net changes under fexp");
  if (checks) *checks += 2;
  return std::nullopt;
}

Outcome simulation_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 12;
  c.requireTypable = true;
  Object o;
  for (int tries = 0;; ++tries) {
    o = gen_object(c, random_sort(rng), rng);
    if (net_size(translate_object(o)) <= 30) break;
    if (tries > 200) throw GenerationExhausted("simulation: no instance with a net of at most 30 nodes");
  }
  Outcome out;
  if (auto v = simulation_violation(o, &out.checks))
    return fail(*v, {o}, [](const Object& x) {
      try {
        return net_size(translate_object(x)) <= 30 && simulation_violation(x, nullptr).has_value();
      } catch (const LmError&) {
        return false;
      }
    });
  return out;
}

// ---- soundness of ≃σ into ≡ ------------------------------------------------

Outcome soundness_case(std::mt19937_64& rng, std::size_t) {
  GenConfig c;
  c.maxSize = 14;
  c.requireTypable = true;
  int k = std::uniform_int_distribution<int>(1, 3)(rng);
  EquivPair e = gen_equiv_pair(c, k, rng);
  Outcome out;
  out.checks = 1;
  if (!try_infer(e.p)) return fail("related object is not typable", {e.o, e.p});
  if (!ppn_equiv(normal_net(e.o), normal_net(e.p))) return fail("nets are not structurally equivalent", {e.o, e.p});
  return out;
}

// ---- correspondence with Laurent's relation --------------------------------

void enum_term(std::size_t n, std::vector<std::string>& vs, std::vector<std::string>& ns,
               std::vector<Object>& out);

void enum_command(std::size_t n, std::vector<std::string>& vs, std::vector<std::string>& ns,
                  std::vector<Object>& out) {
  if (n < 2) return;
  std::vector<Object> bodies;
  enum_term(n - 1, vs, ns, bodies);
  for (auto& a : ns)
    for (auto& t : bodies) out.push_back(named(a, t));
}

void enum_term(std::size_t n, std::vector<std::string>& vs, std::vector<std::string>& ns,
               std::vector<Object>& out) {
  if (n == 1) {
    for (auto& x : vs) out.push_back(var(x));
    return;
  }
  std::string x = "v" + std::to_string(vs.size());
  vs.push_back(x);
  std::vector<Object> bodies;
  enum_term(n - 1, vs, ns, bodies);
  vs.pop_back();
  for (auto& t : bodies) out.push_back(abs(x, t));

  std::string a = "c" + std::to_string(ns.size());
  ns.push_back(a);
  std::vector<Object> cmds;
  enum_command(n - 1, vs, ns, cmds);
  ns.pop_back();
  for (auto& c : cmds) out.push_back(mu(a, c));

  for (std::size_t l = 1; l + 1 < n; ++l) {
    std::vector<Object> fs, as;
    enum_term(l, vs, ns, fs);
    enum_term(n - 1 - l, vs, ns, as);
    for (auto& f : fs)
      for (auto& u : as) out.push_back(app(f, u));
  }
}

struct Corpus {
  std::vector<Object> objects;
  std::vector<std::pair<Object, Object>> pairs;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus c;
    c.objects = enumerate_lambda_mu(7, {"x", "y"}, {"a", "b"});
    // Candidate pairs: objects sharing sort and free identifiers, plus each
    // object with its Laurent neighbours.
    std::map<std::string, std::vector<Object>> groups;
    for (auto& o : c.objects) {
      std::string key = std::string(sort_name(sort_of(o))) + "|";
      for (auto& x : o->fv) key += x + ",";
      key += "|";
      for (auto& a : o->fn) key += a + ",";
      groups[key].push_back(o);
    }
    for (auto& [k, g] : groups)
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size() && j < i + 4; ++j) c.pairs.emplace_back(g[i], g[j]);
    for (auto& o : c.objects)
      for (auto& m : moves(o, Family::Laurent, false))
        if (m.result->size <= 7) c.pairs.emplace_back(o, m.result);
    return c;
  }();
  return c;
}

// Case i examines pair order[i] of a seeded shuffle, so pairs are distinct.
std::vector<std::size_t> pair_order;

Outcome correspondence_case(std::mt19937_64&, std::size_t i) {
  const Corpus& c = corpus();
  const auto& [o, p] = c.pairs[pair_order[i % pair_order.size()]];
  Outcome out;
  out.checks = 1;
  Verdict l = laurent_equiv(o, p);
  Verdict s = sigma_equiv(plain_normal_form(o), plain_normal_form(p), 50000, true);
  out.tag = std::string(verdict_name(l.kind)) + "/" + verdict_name(s.kind);
  if (l.kind == Verdict::Kind::Unknown || s.kind == Verdict::Kind::Unknown) {
    out.kind = Outcome::Kind::Unknown;
    return out;
  }
  if (l.kind != s.kind)
    return fail(std::string("Laurent says ") + verdict_name(l.kind) + ", sigma says " + verdict_name(s.kind), {o, p});
  return out;
}

const std::map<std::string, CaseFn>& table() {
  static const std::map<std::string, CaseFn> t{
      {"weight", weight_case},         {"confluence", confluence_case},
      {"bisim", bisim_case},           {"subject", subject_case},
      {"simulation", simulation_case}, {"soundness", soundness_case},
      {"correspondence", correspondence_case},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (auto& [k, f] : table()) v.push_back(k);
    return v;
  }();
  return n;
}

Result run(const std::string& suite, const Options& opt) {
  auto it = table().find(suite);
  if (it == table().end()) throw PreconditionError("unknown suite: " + suite);
  if (suite == "correspondence") {
    pair_order.resize(corpus().pairs.size());
    for (std::size_t i = 0; i < pair_order.size(); ++i) pair_order[i] = i;
    std::mt19937_64 rng(opt.seed);
    std::shuffle(pair_order.begin(), pair_order.end(), rng);
  }
  return drive(suite, opt, it->second);
}

std::vector<Object> enumerate_lambda_mu(std::size_t maxSize, const std::vector<std::string>& vars,
                                        const std::vector<std::string>& freeNames) {
  std::vector<Object> all;
  std::set<std::string> seen;
  std::vector<std::string> vs = vars, ns = freeNames;
  for (std::size_t n = 1; n <= maxSize; ++n) {
    std::vector<Object> level;
    enum_term(n, vs, ns, level);
    enum_command(n, vs, ns, level);
    for (auto& o : level)
      if (seen.insert(alpha_key(o)).second) all.push_back(o);
  }
  return all;
}

}  // namespace lm::suites
