#pragma once

#include "ctrabs/spec.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ctrabs::front {

struct Pos {
  int line = 0, col = 0;
};

// Surface expression tree. Terms and formulas share the node type; sorting
// them out is validate's job, so the parser accepts e.g. arithmetic over
// arrays that validate later rejects.
struct SExpr;
using SExprP = std::shared_ptr<const SExpr>;
struct SExpr {
  enum class K {
    Num, Ident, Apply, Card, Add, Sub, Mul, Div, Neg,
    Cmp, Cong, Not, And, Or, True, False,
  } k;
  Pos pos;
  Int num;             // Num
  std::string name;    // Ident / Apply head / Card binder
  bool primed = false; // Ident / Apply
  std::string op;      // Cmp: = < <= > >=
  std::vector<SExprP> kids;
};

struct ParsedCase {
  Pos pos;
  std::optional<std::string> forallVar;
  SExprP body;
};

struct ParsedSpec {
  std::vector<std::string> params;
  struct PSort {
    std::string name;
    std::vector<std::string> values;
    Pos pos;
  };
  std::vector<PSort> sorts;
  struct PIntVar {
    std::string name;
    bool boolSwitch = false;
    Pos pos;
  };
  std::vector<PIntVar> intvars;
  struct PArray {
    std::string name;
    std::string sortName; // "int" for arithmetic
    Pos pos;
  };
  std::vector<PArray> arrays;
  struct PCounter {
    std::string name;
    std::string boundVar;
    SExprP body;
    Pos pos;
  };
  std::vector<PCounter> counters;
  std::vector<ParsedCase> invariantCases;
  std::vector<ParsedCase> initCases;
  std::vector<ParsedCase> transCases;
  SExprP unsafe;
  std::string sourceText;
};

ParsedSpec parse_spec(const std::string& text);

// parse -> print -> parse is a fixpoint (structural identity modulo positions)
std::string print_spec(const ParsedSpec& s);
bool spec_struct_eq(const ParsedSpec& a, const ParsedSpec& b);

// standalone DSL expression (property files, --unsafe)
SExprP parse_expression(const std::string& text);

SystemSpec validate(const ParsedSpec& parsed);
SystemSpec desugar_floor_div(const SystemSpec& spec);

// Resolves a surface expression as a quantifier-free arithmetic formula over
// counters, intvars and params of the given vocabulary (safety formulas,
// init strengthenings).
logic::Formula resolve_arith_formula(const SExprP& e, const logic::VocabPtr& vocab);

// Same, but admitting primed symbols and the given derived-local names
// (parsing CounterSystem dumps back in).
logic::Formula resolve_abstract_formula(const SExprP& e, const logic::VocabPtr& vocab,
                                        const std::set<std::string>& derivedNames,
                                        bool allowPrimed);

} // namespace ctrabs::front
