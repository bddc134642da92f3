#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lm/syntax.hpp"

namespace lm {

enum class Rule { dB, S, dM, N, C, W, Nnl, Cnl, Wnl, Rnl, Beta, MuLM };

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);
bool is_plain(Rule r);
bool is_meaningful(Rule r);

using RuleSet = std::set<Rule>;
const RuleSet& plain_rules();
const RuleSet& meaningful_rules();
const RuleSet& all_rules();

struct Step {
  Rule rule;
  Path path;
  Object before;
  Object after;
  std::vector<std::string> fresh;
};

struct NotPlainForm : LmError {
  using LmError::LmError;
};
struct NotLambdaMu : LmError {
  using LmError::LmError;
};

// How the bound name of an explicit replacement occurs in its body.
struct LinearityClass {
  enum class Shape { NonLinearCount, Linear, NonLinear };
  enum class Occurrence { Name, Comp, Swap };
  Shape shape = Shape::NonLinearCount;
  Occurrence occurrence = Occurrence::Name;
  Path focus;
};

LinearityClass classify_replacement(const Object& c, const std::string& a);

std::vector<Step> steps(const Object& o, const RuleSet& rules);
std::optional<Step> first_step(const Object& o, const RuleSet& rules);
bool has_redex(const Object& o, const RuleSet& rules);
bool is_plain_form(const Object& o);

Object plain_normal_form(const Object& o);
Object plain_normal_form_random(const Object& o, std::mt19937_64& rng);

std::vector<Step> meaningful_steps(const Object& o);
std::vector<Step> lmu_steps(const Object& o);

using Weight = boost::multiprecision::cpp_int;
Weight plain_weight(const Object& o);

std::string step_to_json(const Step& s);

}  // namespace lm
