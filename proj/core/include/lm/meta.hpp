#pragma once

#include "lm/syntax.hpp"

namespace lm {

// Capture-avoiding implicit substitution o{x:=u}.
Object substitute(const Object& o, const std::string& x, const Object& u, FreshSupply* fs = nullptr);

// Implicit replacement: every free call ['a] t becomes ['out] t@s.
Object replace(const Object& o, const std::string& a, const Object& s, const std::string& out,
               FreshSupply* fs = nullptr);

// Implicit renaming of the free name a to b.
Object rename_name(const Object& o, const std::string& a, const std::string& b, FreshSupply* fs = nullptr);

// t@s, left-nested application.
Object apply_stack(const Object& t, const Object& s);

// α-rename every binder in o whose identifier is in the given avoid sets.
Object refresh_binders(const Object& o, const IdSet& avoidVars, const IdSet& avoidNames, FreshSupply& fs);

}  // namespace lm
