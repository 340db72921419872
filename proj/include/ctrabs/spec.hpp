#pragma once

#include "ctrabs/formula.hpp"

#include <optional>
#include <vector>

namespace ctrabs::front {

// One case of Phi / iota / tau: a conjunction of extended arithmetic literals
// and a Data-formula, both over the single (renamed-apart) Proc variable.
struct TransitionCase {
  std::vector<logic::Formula> arithLits; // Atom or Not(Atom); Cmp/Cong atoms only
  logic::Formula dataPart;               // Data-formula (f_true() when absent)
};

inline const char* kCaseVar = "$x"; // canonical bound Proc variable of cases

// floor-div witness: sym = floor(num / div), introduced by desugar_floor_div
struct DerivedDef {
  logic::Sym sym;
  logic::Term num;
  Int div;
  bool perProcess = false; // numerator mentions an array read
};

struct SystemSpec {
  logic::VocabPtr vocab;
  std::vector<TransitionCase> invariantPhi; // disjuncts; empty = true
  TransitionCase init;
  std::vector<TransitionCase> transCases; // forall x . OR of cases
  logic::Formula safetyBad;
  std::vector<DerivedDef> derived;
  uint64_t sourceHash = 0;
};

} // namespace ctrabs::front
