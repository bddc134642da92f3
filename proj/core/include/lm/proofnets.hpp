#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lm/reduction.hpp"
#include "lm/syntax.hpp"
#include "lm/typing.hpp"

namespace lm {

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  enum class Tag { Atom, NegAtom, Par, Tensor, Why, Bang };
  Tag tag;
  std::string atom;
  Formula left;   // Par/Tensor left, Why/Bang body
  Formula right;  // Par/Tensor right
};

Formula f_atom(const std::string& a, bool negated = false);
Formula f_par(const Formula& a, const Formula& b);
Formula f_tensor(const Formula& a, const Formula& b);
Formula f_why(const Formula& a);
Formula f_bang(const Formula& a);
Formula negate(const Formula& f);
bool formula_equal(const Formula& a, const Formula& b);
// Negative formulas (atoms, par, why) admit weakening and contraction.
bool is_negative(const Formula& f);
std::string render_formula(const Formula& f);

Formula formula_of_type(const Type& t);
Formula formula_of_stacktype(const std::vector<Type>& s, const Type& b);

enum class LinkKind { Ax, Cut, Weak, Contr, Tensor, Par, Der, Box };
const char* link_kind_name(LinkKind k);

struct Net;

// Ax: out [negative end, positive end].  Cut: in [a, b].  Weak: out [w].
// Contr: in [premises...], out [c].  Tensor/Par: in [l, r], out [c].
// Der: in [q], out [?q].  Box: out [principal, aux...] where out[i]
// corresponds to inner->concl[i] and inner->concl[0] is the boxed output.
struct Link {
  LinkKind kind;
  std::vector<int> in;
  std::vector<int> out;
  std::shared_ptr<const Net> inner;
};

struct Label {
  enum class Kind { Var, Name, Dist, StackOut, Aux };
  Kind kind = Kind::Aux;
  std::string id;
  bool operator==(const Label& o) const { return kind == o.kind && id == o.id; }
  bool operator<(const Label& o) const { return kind != o.kind ? kind < o.kind : id < o.id; }
};
std::string render_label(const Label& l);

struct Conclusion {
  int wire;
  Label label;
};

// Every wire has exactly one producer (a link output) and one consumer
// (a link input or a conclusion).
struct Net {
  std::vector<Formula> wires;
  std::vector<Link> links;
  std::vector<Conclusion> concl;
};

struct InvalidDerivation : LmError {
  using LmError::LmError;
};
struct Untypable : LmError {
  using LmError::LmError;
};

// Terms get a Dist conclusion. Stacks get Dist (the positive anti-output)
// and StackOut (the output continuation).
Net translate(const Derivation& d);
Net translate_object(const Object& o);

enum class PpnRule { Ax, TensorPar, BangWeak, BangDer, BangContr, BangBox, TensorWeak, TensorContr, TensorBox };
const char* ppn_rule_name(PpnRule r);
std::optional<PpnRule> ppn_rule_from_name(const std::string& s);
using PpnRuleSet = std::set<PpnRule>;
const PpnRuleSet& all_ppn_rules();
const PpnRuleSet& multiplicative_rules();

std::vector<std::pair<PpnRule, Net>> ppn_steps(const Net& n, const PpnRuleSet& rules);
Net mult_normal_form(const Net& n, std::vector<PpnRule>* trace = nullptr);

// Representative of the structural equivalence class.
Net canonicalize(const Net& n);
// Alternates mult_normal_form and canonicalize until neither applies.
Net canonical_mnf(const Net& n, std::vector<PpnRule>* trace = nullptr);
bool ppn_equiv(const Net& a, const Net& b);

std::size_t net_size(const Net& n);  // links, boxes counted recursively
std::size_t cut_count(const Net& n, const PpnRuleSet& rules);
bool well_formed(const Net& n, std::string* why = nullptr);

struct SimReport {
  bool ok = false;
  Rule rule;
  std::vector<PpnRule> sequence;
  std::size_t explored = 0;
  std::string message;
};
// Allowed non-multiplicative rules per step rule; comparison is on
// multiplicative normal forms up to structural equivalence.
PpnRuleSet simulation_rules(Rule r);
SimReport simulate_check(const Object& o, const Step& step, std::size_t max_states = 4000);

std::string net_to_json(const Net& n);
std::string net_to_dot(const Net& n);

}  // namespace lm
