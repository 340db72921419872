#pragma once

#include "ctrabs/pipeline.hpp"

#include <string>

namespace ctrabs::chc {

struct HornProblem {
  std::string predicateName = "inv";
  std::vector<logic::Sym> argumentOrder; // params ++ intVars ++ counters
  std::string text;
};

// Quantified-implication HORN script: one init rule per iota0 disjunct, one
// step rule per tau0 disjunct, a query rule for bad. `sat` = an inductive
// invariant exists (safe); `unsat` = the abstraction reaches bad.
HornProblem emit_horn(const pipe::CounterSystem& cs, const logic::Formula& bad,
                      const logic::Formula& strengthen = nullptr,
                      const std::string& headerComment = "");

// k-step unrolling as a single satisfiability query (debugging aid). `sat`
// exhibits a k-step abstract counterexample.
std::string emit_bounded_smt(const pipe::CounterSystem& cs, const logic::Formula& bad, int k,
                             const logic::Formula& strengthen = nullptr);

} // namespace ctrabs::chc
