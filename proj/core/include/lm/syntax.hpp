#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lm {

enum class Sort { Term, Command, Stack };
enum class Kind { Var, App, Abs, Mu, ESub, Named, ERepl, ERen, Stack };

struct Node;
using Object = std::shared_ptr<const Node>;
using Path = std::vector<int>;
// Sorted, duplicate-free identifier list.
using IdSet = std::vector<std::string>;

// Children by kind:
//   App [fun, arg]   Abs [body]   Mu [body]   ESub [body, arg]
//   Named [term]     ERepl [body, stack]      ERen [body]   Stack [items...]
// id:  Var/Abs/ESub variable, Mu/ERepl/ERen bound name, Named name.
// id2: ERepl output name, ERen target name.
struct Node {
  Kind kind;
  std::string id;
  std::string id2;
  std::vector<Object> kids;
  IdSet fv;
  IdSet fn;
  std::size_t size = 1;
};

struct LmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SyntaxError : LmError {
  std::size_t position;
  std::string expected;
  SyntaxError(std::size_t pos, std::string exp);
};
struct SortError : LmError {
  using LmError::LmError;
};
struct InvariantError : LmError {
  using LmError::LmError;
};
struct PreconditionError : LmError {
  using LmError::LmError;
};

Sort sort_of(const Object& o);
const char* sort_name(Sort s);
const char* kind_name(Kind k);

bool contains(const IdSet& s, const std::string& id);

// Hands out identifiers with a numeric suffix that avoid every reserved identifier.
class FreshSupply {
 public:
  FreshSupply() = default;
  explicit FreshSupply(const Object& o) { reserve(o); }
  void reserve(const Object& o);
  void reserve(const std::string& id) { used_.insert(id); }
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

// Unchecked constructor; computes fv/fn/size.
Object make_node(Kind kind, std::string id, std::string id2, std::vector<Object> kids);

// Smart constructors. Binders are α-refreshed when an invariant would break.
Object var(const std::string& x);
Object app(const Object& t, const Object& u);
Object abs(const std::string& x, const Object& t);
Object mu(const std::string& a, const Object& c);
Object esub(const Object& t, const std::string& x, const Object& u, FreshSupply* fs = nullptr);
Object named(const std::string& a, const Object& t);
Object erepl(const Object& c, const std::string& a, const Object& s, const std::string& out,
             FreshSupply* fs = nullptr);
Object eren(const Object& c, const std::string& a, const std::string& b, FreshSupply* fs = nullptr);
Object stack(std::vector<Object> items);
Object stack_concat(const Object& s, const Object& s2);

// Rename free occurrences of `from` to `to`; `to` must not occur in o.
Object rename_fresh(const Object& o, const std::string& from, const std::string& to, bool name);

int count_name(const Object& o, const std::string& a);
int count_var(const Object& o, const std::string& x);
std::set<std::string> identifiers(const Object& o);

struct Analysis {
  IdSet fv;
  IdSet fn;
  std::map<std::string, int> name_count;
  int count(const std::string& a) const;
};
Analysis analyze(const Object& o);

bool is_lambda_mu(const Object& o);
const Object& at(const Object& o, const Path& p);
Object replace_at(const Object& o, const Path& p, const Object& sub, FreshSupply* fs = nullptr);

std::string alpha_key(const Object& o);
bool alpha_equal(const Object& o, const Object& p);

Object parse(const std::string& text, Sort sort);
Object parse_any(const std::string& text);
std::string render(const Object& o);
std::string path_string(const Path& p);

std::string to_json(const Object& o);
Object from_json(const std::string& text);

}  // namespace lm
