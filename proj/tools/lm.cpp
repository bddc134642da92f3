#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lm/equivalence.hpp"
#include "lm/gen.hpp"
#include "lm/proofnets.hpp"
#include "lm/reduction.hpp"
#include "lm/syntax.hpp"
#include "lm/typing.hpp"
#include "suites.hpp"

using namespace lm;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kUnknown = 3 };

struct Globals {
  bool json = false;
  std::string sort;
};
Globals g;

std::string read_arg(const std::string& s) {
  if (s.empty() || s[0] != '@') return s;
  std::ifstream in(s.substr(1));
  if (!in) throw PreconditionError("cannot read " + s.substr(1));
  std::stringstream buf;
  buf << in.rdbuf();
  std::string t = buf.str();
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  return t;
}

Object object(const std::string& arg) {
  std::string text = read_arg(arg);
  if (g.sort.empty()) return parse_any(text);
  if (g.sort == "term") return parse(text, Sort::Term);
  if (g.sort == "command") return parse(text, Sort::Command);
  if (g.sort == "stack") return parse(text, Sort::Stack);
  throw PreconditionError("--sort must be term, command or stack");
}

void emit(const json& j, const std::string& text) {
  if (g.json)
    std::cout << j.dump() << "\n";
  else if (!text.empty())
    std::cout << text << "\n";
}

int verdict_exit(Verdict::Kind k) {
  return k == Verdict::Kind::Equivalent ? kOk : k == Verdict::Kind::NotEquivalent ? kFail : kUnknown;
}

RuleSet rules_named(const std::string& s) {
  if (s == "plain") return plain_rules();
  if (s == "meaningful") return meaningful_rules();
  if (s == "all") return all_rules();
  if (s == "lmu") return {Rule::Beta, Rule::MuLM};
  RuleSet out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    auto r = rule_from_name(item);
    if (!r) throw PreconditionError("unknown rule " + item);
    out.insert(*r);
  }
  return out;
}

std::string steps_text(const std::vector<Step>& st) {
  std::string out;
  for (auto& s : st) out += std::string(rule_name(s.rule)) + " " + path_string(s.path) + " " + render(s.after) + "\n";
  if (!out.empty()) out.pop_back();
  return out;
}

json steps_json(const std::vector<Step>& st) {
  json a = json::array();
  for (auto& s : st) a.push_back(json::parse(step_to_json(s)));
  return a;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("LM_SEED")) return std::strtoull(s, nullptr, 10);
  return 1;
}

Net net_of(const Object& o, bool mnf) {
  Net n = translate_object(o);
  return mnf ? canonical_mnf(n) : n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lm: ΛM-calculus workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--sort", g.sort, "Sort of object arguments")->check(CLI::IsMember({"term", "command", "stack"}));

  int code = kOk;
  std::string a1, a2;
  auto one = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("object", a1, "Object text or @file")->required();
    return s;
  };
  auto two = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("first", a1, "Object text or @file")->required();
    s->add_option("second", a2, "Object text or @file")->required();
    return s;
  };

  one("parse", "Parse and print the syntax tree")->callback([&] {
    Object o = object(a1);
    std::cout << to_json(o) << "\n";
  });

  one("render", "Render a syntax tree (JSON) or text in canonical syntax")->callback([&] {
    std::string t = read_arg(a1);
    Object o = !t.empty() && t[0] == '{' ? from_json(t) : object(a1);
    emit({{"text", render(o)}}, render(o));
  });

  one("fcan", "Plain normal form")->callback([&] {
    Object o = plain_normal_form(object(a1));
    emit({{"result", render(o)}}, render(o));
  });

  std::string ruleSpec = "all";
  one("steps", "List one-step reducts")->add_option("--rules", ruleSpec, "plain|meaningful|all|lmu|R1,R2,...");
  app.get_subcommand("steps")->callback([&] {
    Object o = object(a1);
    // Meaningful steps are reported with their fcan'd results.
    auto st = ruleSpec == "meaningful" ? meaningful_steps(o) : steps(o, rules_named(ruleSpec));
    emit(steps_json(st), steps_text(st));
  });

  std::size_t maxSteps = 1000;
  bool lmu = false;
  auto* red = one("reduce", "Reduce with all calculus (or λμ) steps, leftmost first, bounded");
  red->add_option("--max", maxSteps, "Step bound");
  red->add_flag("--lmu", lmu, "Use the λμ rules");
  red->callback([&] {
    Object cur = object(a1);
    std::vector<Step> trace;
    RuleSet rs = lmu ? RuleSet{Rule::Beta, Rule::MuLM} : all_rules();
    while (trace.size() < maxSteps) {
      auto s = first_step(cur, rs);
      if (!s) break;
      trace.push_back(*s);
      cur = s->after;
    }
    bool normal = !has_redex(cur, rs);
    emit({{"result", render(cur)}, {"steps", steps_json(trace)}, {"normal", normal}},
         (trace.empty() ? "" : steps_text(trace) + "\n") + render(cur));
    if (!normal) code = kUnknown;
  });

  one("weight", "Plain weight")->callback([&] {
    Weight w = plain_weight(object(a1));
    emit({{"weight", w.str()}}, w.str());
  });

  bool full = false;
  one("typeof", "Principal type")->add_flag("--full", full, "Print the whole judgment");
  app.get_subcommand("typeof")->callback([&] {
    Typing t = infer(object(a1));
    std::string ty = t.type ? render_type(*t.type) : "#";
    if (!t.stack_type.empty()) {
      ty.clear();
      for (auto& x : t.stack_type) ty += (ty.empty() ? "" : " . ") + render_type(x);
    }
    emit({{"type", ty}, {"judgment", render_typing(t)}}, full ? render_typing(t) : ty);
  });

  one("derive", "Principal typing derivation")->callback([&] {
    Typing t = infer(object(a1));
    std::cout << (g.json ? derivation_to_json(t.derivation) : render_typing(t)) << "\n";
    if (!g.json) std::cout << derivation_to_json(t.derivation) << "\n";
  });

  bool er = false, laurent = false;
  std::size_t budget = 50000;
  int expand = 1;
  auto* eq = two("equiv", "Decide ≃σ (or Laurent's relation) by bounded search");
  eq->add_flag("--er", er, "Include the renaming equation");
  eq->add_flag("--laurent", laurent, "Laurent's relation on λμ objects");
  eq->add_option("--budget", budget, "Node budget");
  eq->add_option("--expand", expand, "Expansion depth per side");
  eq->callback([&] {
    Object o = object(a1), p = object(a2);
    Verdict v = laurent ? laurent_equiv(o, p, budget, expand) : sigma_equiv(o, p, budget, er, expand);
    std::string text = verdict_name(v.kind);
    for (auto& s : v.path)
      text += std::string("\n") + axiom_name(s.axiom) + (s.forward ? " -> " : " <- ") + path_string(s.path) + " " +
              render(s.after);
    emit(json::parse(verdict_to_json(v)), text);
    code = verdict_exit(v.kind);
  });

  one("fexp", "Expand explicit operators into λμ")->callback([&] {
    Object o = fexp(object(a1));
    emit({{"result", render(o)}}, render(o));
  });

  bool dot = false, mnf = false;
  auto* tr = one("translate", "Polarized proof net of the principal derivation");
  tr->add_flag("--dot", dot, "Graphviz output");
  tr->add_flag("--mnf", mnf, "Multiplicative normal form");
  tr->callback([&] {
    Net n = net_of(object(a1), mnf);
    if (dot)
      std::cout << net_to_dot(n);
    else if (g.json)
      std::cout << net_to_json(n) << "\n";
    else
      std::cout << "links " << n.links.size() << ", size " << net_size(n) << ", cuts "
                << cut_count(n, all_ppn_rules()) << "\n"
                << net_to_json(n) << "\n";
  });

  two("ppn-equiv", "Structural equivalence of multiplicative normal forms")->callback([&] {
    bool ok = ppn_equiv(net_of(object(a1), true), net_of(object(a2), true));
    emit({{"equivalent", ok}}, ok ? "Equivalent" : "NotEquivalent");
    code = ok ? kOk : kFail;
  });

  std::string onlyRule;
  auto* sim = one("simulate", "Check proof-net simulation of every step");
  sim->add_option("--rule", onlyRule, "Restrict to one rule");
  sim->callback([&] {
    Object o = object(a1);
    json arr = json::array();
    std::string text;
    // Plain steps as they are; meaningful steps with their fcan'd results.
    std::vector<Step> all = steps(o, plain_rules());
    if (is_plain_form(o))
      for (auto& s : meaningful_steps(o)) all.push_back(s);
    for (const Step& s : all) {
      if (!onlyRule.empty() && onlyRule != rule_name(s.rule)) continue;
      SimReport r = simulate_check(o, s);
      json seq = json::array();
      std::string st;
      for (auto q : r.sequence) {
        seq.push_back(ppn_rule_name(q));
        st += std::string(" ") + ppn_rule_name(q);
      }
      arr.push_back({{"rule", rule_name(s.rule)},
                     {"path", s.path},
                     {"ok", r.ok},
                     {"sequence", seq},
                     {"message", r.message}});
      text += std::string(rule_name(s.rule)) + " " + path_string(s.path) + (r.ok ? " ok" : " FAIL") + st +
              (r.message.empty() ? "" : " (" + r.message + ")") + "\n";
      if (!r.ok) code = kFail;
    }
    if (!text.empty()) text.pop_back();
    emit(arr, text);
  });

  auto* bi = two("bisim", "Check the strong bisimulation diagram for a related pair");
  bi->add_flag("--laurent", laurent, "λμ steps against Laurent's relation");
  bi->add_option("--budget", budget, "Node budget");
  bi->add_option("--expand", expand, "Expansion depth per side");
  bi->callback([&] {
    BisimReport r = bisim_diagram(object(a1), object(a2), budget, expand, laurent);
    json arr = json::array();
    std::string text;
    for (auto& e : r.entries) {
      arr.push_back({{"side", e.left ? "left" : "right"},
                     {"step", json::parse(step_to_json(e.step))},
                     {"verdict", verdict_name(e.verdict)},
                     {"match", e.match ? json::parse(step_to_json(*e.match)) : json()},
                     {"witness", json::parse(witness_to_json(e.witness))}});
      text += std::string(e.left ? "left  " : "right ") + rule_name(e.step.rule) + " " + path_string(e.step.path) +
              " -> " + (e.match ? std::string(rule_name(e.match->rule)) + " " + path_string(e.match->path) : "none") +
              "\n";
    }
    text += r.ok ? "diagram closes" : r.unknown ? "undecided: " + r.failure : "fails: " + r.failure;
    emit({{"ok", r.ok}, {"unknown", r.unknown}, {"failure", r.failure}, {"entries", arr}}, text);
    code = r.ok ? kOk : r.unknown ? kUnknown : kFail;
  });

  std::string suite, dump;
  suites::Options fo;
  fo.seed = default_seed();
  auto* fz = app.add_subcommand("fuzz", "Run a property suite");
  fz->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suites::names()));
  fz->add_option("--seed", fo.seed, "Seed (default $LM_SEED or 1)");
  fz->add_option("--n", fo.n, "Number of cases");
  fz->add_option("--workers", fo.workers, "Worker threads");
  fz->add_option("--dump", dump, "Write failing cases to this corpus file");
  fz->callback([&] {
    suites::Result r = suites::run(suite, fo);
    json fails = json::array();
    for (auto& f : r.failing)
      fails.push_back({{"case", f.index}, {"message", f.message}, {"input", f.input}, {"shrunk", f.shrunk}});
    std::ostringstream text;
    text << r.suite << ": " << r.cases << " cases, " << r.checks << " checks, " << r.failures << " failures, "
         << r.unknown << " unknown, " << r.seconds << " s";
    for (auto& [tag, count] : r.tally) text << "\n  " << tag << ": " << count;
    for (auto& f : r.failing)
      text << "\ncase " << f.index << ": " << f.message << "\n" << f.input << (f.shrunk.empty() ? "" : "shrunk: ")
           << f.shrunk;
    emit({{"suite", r.suite},
          {"cases", r.cases},
          {"checks", r.checks},
          {"failures", r.failures},
          {"unknown", r.unknown},
          {"seconds", r.seconds},
          {"tally", r.tally},
          {"failing", fails}},
         text.str());
    if (!dump.empty() && !r.failing.empty()) {
      std::ofstream out(dump);
      for (auto& f : r.failing) out << "# case " << f.index << ": " << f.message << "\n" << f.input;
    }
    code = r.passed() ? kOk : kFail;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotPlainForm& e) {
    std::cerr << "error: " << e.what() << " (apply fcan first)\n";
    return kUsage;
  } catch (const SortMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotLambdaMu& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SortError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return code;
}
