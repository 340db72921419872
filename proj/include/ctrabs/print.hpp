#pragma once

#include "ctrabs/formula.hpp"

#include <string>

namespace ctrabs::logic {

struct Linear;
struct LinCon;

// DSL expression syntax throughout; arrays print as their declared names when
// a vocab is supplied, as @<index> otherwise (interning keys, debug).
std::string print_sym(const Sym& s);
std::string print_term(const Term& t, const Vocab* v = nullptr);
std::string print_atom(const Atom& a, const Vocab* v = nullptr);
std::string print_formula(const Formula& f, const Vocab* v = nullptr);
std::string print_linear(const Linear& l);
std::string print_lincon(const LinCon& c);

} // namespace ctrabs::logic
