#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "lm/equivalence.hpp"
#include "lm/syntax.hpp"

namespace lm {

struct GenerationExhausted : LmError {
  using LmError::LmError;
};

// Relative constructor frequencies. Explicit operators are weighted up.
// Variables appear only at leaves so objects fill the drawn size.
struct GenWeights {
  int app = 3, abs = 3, mu = 2, esub = 3, redex = 2;  // redex: an abstraction or μ applied
  int named = 4, erepl = 3, eren = 2;
};

struct GenConfig {
  std::size_t maxSize = 12;
  std::vector<std::string> freeVars{"x", "y", "z"};
  std::vector<std::string> freeNames{"a", "b"};
  bool requirePlain = false;
  bool requireTypable = false;
  std::uint64_t seed = 0;
  GenWeights weights;
  int retries = 2000;  // rejection bound for typable or plain-within-bound output
};

// Same seed and config give the same object.
Object gen_object(const GenConfig& cfg, Sort sort);
Object gen_object(const GenConfig& cfg, Sort sort, std::mt19937_64& rng);

struct EquivPair {
  Object o;
  Object p;
  Witness witness;
};
// o is plain; p is reached by at most k random ≃σ moves recorded in witness.
EquivPair gen_equiv_pair(const GenConfig& cfg, int k);
EquivPair gen_equiv_pair(const GenConfig& cfg, int k, std::mt19937_64& rng);

// Smaller objects of the same sort: sub-objects first, then shrunk children
// and stacks with fewer items.
std::vector<Object> shrink_candidates(const Object& o);
// Greedy shrinking that keeps `fails` true.
Object shrink(const Object& o, const std::function<bool(const Object&)>& fails);

}  // namespace lm
