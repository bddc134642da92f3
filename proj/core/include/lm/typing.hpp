#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lm/reduction.hpp"
#include "lm/syntax.hpp"

namespace lm {

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  enum class Tag { Base, Arrow, Meta };
  Tag tag;
  std::string base;
  int meta = -1;
  Type dom;
  Type cod;
};

Type base_type(const std::string& name);
Type arrow(const Type& a, const Type& b);
Type meta_type(int id);
// A1 -> ... -> An -> B.
Type stack_arrow(const std::vector<Type>& s, const Type& b);
bool type_equal(const Type& a, const Type& b);
std::string render_type(const Type& t);
Type parse_type(const std::string& text);

using Context = std::map<std::string, Type>;

struct Judgment {
  Context gamma;
  Context delta;
  Object subject;
  std::optional<Type> type;       // terms
  std::vector<Type> stack_type;   // stacks of length >= 2
};

enum class TypingRule { Var, App, Abs, Cont, Name, Subs, Repl, Ren, Stk };
const char* typing_rule_name(TypingRule r);

struct Derivation {
  TypingRule rule;
  Judgment conclusion;
  std::vector<Derivation> premises;
};

struct Typing {
  Context gamma;
  Context delta;
  std::optional<Type> type;
  std::vector<Type> stack_type;
  Derivation derivation;
};

struct TypeFailure : LmError {
  Path path;
  TypeFailure(const std::string& msg, Path p);
};

// Principal typing. Atoms are named A, B, ... by first occurrence.
Typing infer(const Object& o);
std::optional<Typing> try_infer(const Object& o);

// Typing of o specialised to agree with a given typing: variables and names
// shared with `expected` get its types and the subject type is matched.
std::optional<Typing> infer_against(const Object& o, const Typing& expected);

struct CheckResult {
  bool ok = true;
  Path node;  // premise indices to the first violating node
  std::string message;
};
CheckResult check(const Derivation& d);

bool subject_step_check(const Object& o, const Step& step);
bool subject_expansion_check(const Step& step);

std::string derivation_to_json(const Derivation& d);
std::string render_typing(const Typing& t);

}  // namespace lm
