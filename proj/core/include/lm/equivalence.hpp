#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lm/reduction.hpp"
#include "lm/syntax.hpp"

namespace lm {

enum class Axiom { exsubs, exrepl, exren, ppop, P, theta, ren, s1, s2, s3, s4, s5, s6, s7, s8 };
const char* axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(const std::string& s);

// Which generating equations a search uses.
enum class Family { Sigma, SigmaRen, Laurent };

struct Move {
  Axiom axiom;
  bool forward;    // left-to-right as the equation is written
  bool expansion;  // grows the object; limited by the expansion depth
  Path path;
  Object result;
};

struct WitnessStep {
  Axiom axiom;
  bool forward;
  Path path;
  Object before;
  Object after;
};
using Witness = std::vector<WitnessStep>;

struct Verdict {
  enum class Kind { Equivalent, NotEquivalent, Unknown };
  Kind kind = Kind::Unknown;
  Witness path;
  std::size_t closed_set_size = 0;
  std::size_t explored = 0;
};
const char* verdict_name(Verdict::Kind k);

struct SortMismatch : LmError {
  using LmError::LmError;
};

// Single-equation rewrites at every position. Size-preserving equations are
// used in both directions; growing directions only when allowExpansion.
std::vector<Move> moves(const Object& o, Family fam, bool allowExpansion);

std::vector<Object> sigma_neighbors(const Object& o, int expandDepth);

Verdict sigma_equiv(const Object& o, const Object& p, std::size_t budget = 50000, bool withRen = false,
                    int expandDepth = 1);
Verdict laurent_equiv(const Object& o, const Object& p, std::size_t budget = 50000, int expandDepth = 1);

// Checks that every step is an instance of its equation and that the chain
// links o to p up to α.
bool replay(const Object& o, const Object& p, const Witness& w, Family fam);

Object fexp(const Object& o);

struct BisimEntry {
  bool left;  // the step is taken on the first object
  Step step;
  std::optional<Step> match;
  Verdict::Kind verdict = Verdict::Kind::NotEquivalent;
  Witness witness;
};

struct BisimReport {
  bool ok = true;
  bool unknown = false;  // some step only had Unknown candidates
  std::vector<BisimEntry> entries;
  std::string failure;  // description of the first unmatched step
};

// Meaningful steps and ≃σ, or λμ steps and Laurent's relation.
BisimReport bisim_diagram(const Object& o, const Object& p, std::size_t budget = 50000, int expandDepth = 1,
                          bool laurent = false);

std::string witness_to_json(const Witness& w);
std::string verdict_to_json(const Verdict& v);

}  // namespace lm
