#pragma once

// Reference implementations over the JSON syntax tree, written independently
// of the library so they can cross-check it.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "json.hpp"
#include "lm/syntax.hpp"

namespace oracle {

using nlohmann::json;
using Big = boost::multiprecision::cpp_int;

inline json tree(const lm::Object& o) { return json::parse(lm::to_json(o)); }

inline Big weight(const json& j) {
  const std::string k = j["k"];
  if (k == "Var") return 3;
  if (k == "App") return weight(j["fun"]) * weight(j["arg"]);
  if (k == "Abs") return weight(j["body"]);
  if (k == "Mu") return weight(j["body"]) + 1;
  if (k == "ESub") return weight(j["body"]) + weight(j["arg"]);
  if (k == "Named") return weight(j["t"]);
  if (k == "ERepl") return weight(j["body"]) * weight(j["s"]) + 1;
  if (k == "ERen") return weight(j["body"]) + 1;
  Big w = 1;
  for (auto& i : j["items"]) w *= weight(i);
  return w;
}

// Nameless rendering: bound identifiers become binder distances, free ones
// keep their names. Equal strings mean α-equivalent objects.
struct Nameless {
  std::vector<std::string> vars, names;

  static std::string find(const std::vector<std::string>& env, const std::string& id, char tag) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i] == id) return std::string(1, tag) + std::to_string(env.size() - 1 - i);
    return std::string("free:") + id;
  }
  std::string var(const json& v) { return find(vars, v["var"], '#'); }
  std::string name(const json& a) { return find(names, a["name"], '@'); }

  std::string go(const json& j) {
    const std::string k = j["k"];
    if (k == "Var") return var(j["x"]);
    if (k == "App") return "(" + go(j["fun"]) + " " + go(j["arg"]) + ")";
    if (k == "Abs") {
      vars.push_back(j["x"]["var"]);
      std::string b = go(j["body"]);
      vars.pop_back();
      return "(L " + b + ")";
    }
    if (k == "Mu") {
      names.push_back(j["a"]["name"]);
      std::string b = go(j["body"]);
      names.pop_back();
      return "(M " + b + ")";
    }
    if (k == "ESub") {
      std::string u = go(j["arg"]);
      vars.push_back(j["x"]["var"]);
      std::string t = go(j["body"]);
      vars.pop_back();
      return "(S " + t + " " + u + ")";
    }
    if (k == "Named") return "[" + name(j["a"]) + " " + go(j["t"]) + "]";
    if (k == "ERepl") {
      std::string s = go(j["s"]), out = name(j["out"]);
      names.push_back(j["a"]["name"]);
      std::string c = go(j["body"]);
      names.pop_back();
      return "(R " + c + " " + s + " " + out + ")";
    }
    if (k == "ERen") {
      std::string b = name(j["b"]);
      names.push_back(j["a"]["name"]);
      std::string c = go(j["body"]);
      names.pop_back();
      return "(N " + c + " " + b + ")";
    }
    std::string out = "(K";
    for (auto& i : j["items"]) out += " " + go(i);
    return out + ")";
  }
};

inline std::string nameless(const lm::Object& o) { return Nameless{}.go(tree(o)); }
inline bool alpha(const lm::Object& a, const lm::Object& b) { return nameless(a) == nameless(b); }

// Implicit replacement of name `a` by stack items and output name `out`, for
// objects whose binders never clash with a, out or the stack's identifiers.
inline json app_json(json t, const json& u) { return json{{"k", "App"}, {"fun", std::move(t)}, {"arg", u}}; }

inline json replace(const json& j, const std::string& a, const json& items, const std::string& out) {
  const std::string k = j["k"];
  json r = j;
  if (k == "Var") return r;
  if (k == "App") {
    r["fun"] = replace(j["fun"], a, items, out);
    r["arg"] = replace(j["arg"], a, items, out);
  } else if (k == "Abs" || k == "Mu") {
    r["body"] = replace(j["body"], a, items, out);
  } else if (k == "ESub") {
    r["body"] = replace(j["body"], a, items, out);
    r["arg"] = replace(j["arg"], a, items, out);
  } else if (k == "Named") {
    json t = replace(j["t"], a, items, out);
    if (j["a"]["name"] == a) {
      for (auto& i : items) t = app_json(t, i);
      r["a"] = json{{"name", out}};
    }
    r["t"] = t;
  } else if (k == "ERepl") {
    r["body"] = replace(j["body"], a, items, out);
    r["s"] = replace(j["s"], a, items, out);
    if (j["out"]["name"] == a) {
      r["out"] = json{{"name", out}};
      for (auto& i : items) r["s"]["items"].push_back(i);
    }
  } else if (k == "Stack") {
    for (auto& i : r["items"]) i = replace(i, a, items, out);
  }
  return r;
}

}  // namespace oracle
