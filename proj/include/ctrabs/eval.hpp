#pragma once

#include "ctrabs/formula.hpp"

#include <map>
#include <vector>

namespace ctrabs::logic {

// Explicit configuration at a fixed process count. Enumerated arrays store
// value indices, arithmetic arrays integers; arrays trimmed from the state
// vector stay empty.
struct ConcreteState {
  int64_t n = 0;
  std::map<std::string, int64_t> params;
  std::map<std::string, int64_t> ints;
  std::vector<std::vector<int64_t>> arrs;

  friend bool operator<(const ConcreteState& a, const ConcreteState& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.params != b.params) return a.params < b.params;
    if (a.ints != b.ints) return a.ints < b.ints;
    return a.arrs < b.arrs;
  }
  friend bool operator==(const ConcreteState& a, const ConcreteState& b) {
    return a.n == b.n && a.params == b.params && a.ints == b.ints && a.arrs == b.arrs;
  }
};

struct EvalCtx {
  const Vocab* vocab = nullptr;
  const ConcreteState* pre = nullptr;
  const ConcreteState* post = nullptr;         // primed state; may be null
  std::map<Sym, int64_t> symEnv;               // counters, derived locals, skolems
  std::map<std::string, int64_t> procVars;
  int64_t existsBound = -1;                    // bound for ExistsInt search; <0 = unbounded error
};

int64_t eval_term(const Term& t, EvalCtx& ctx);
bool eval_formula(const Formula& f, EvalCtx& ctx);

} // namespace ctrabs::logic
