#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lm/syntax.hpp"

namespace lm::suites {

struct Failure {
  std::size_t index;
  std::string message;
  std::string input;   // text syntax, one object per line
  std::string shrunk;  // shrunk counterexample when the suite supports it
};

struct Result {
  std::string suite;
  std::size_t cases = 0;
  std::size_t checks = 0;  // individual steps or pairs examined
  std::size_t failures = 0;
  std::size_t unknown = 0;
  std::vector<Failure> failing;
  std::map<std::string, std::size_t> tally;  // per-case tags, e.g. verdict pairs
  double seconds = 0;
  bool passed() const { return failures == 0; }
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  unsigned workers = 1;
};

const std::vector<std::string>& names();
// Throws PreconditionError for an unknown suite.
Result run(const std::string& suite, const Options& opt);

// All pure λμ terms and commands up to the size bound over the given free
// pools, one per α-class.
std::vector<Object> enumerate_lambda_mu(std::size_t maxSize, const std::vector<std::string>& vars,
                                        const std::vector<std::string>& freeNames);

}  // namespace lm::suites
