#pragma once

#include "ctrabs/eval.hpp"
#include "ctrabs/pipeline.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctrabs::oracle {

using front::SystemSpec;
using logic::ConcreteState;
using logic::Formula;
using logic::Sym;
using pipe::CounterSystem;

struct Options {
  std::map<std::string, int64_t> params; // values for parameters other than N
  int64_t arithLo = 0;
  std::optional<int64_t> arithHi; // default: N
  uint64_t stateBudget = 10'000'000;
  int cexLimit = 5;
};

struct AbstractState {
  std::vector<int64_t> z;  // counters, declaration order
  std::vector<int64_t> iv; // intvars, declaration order
  friend bool operator<(const AbstractState& a, const AbstractState& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.iv < b.iv;
  }
  friend bool operator==(const AbstractState& a, const AbstractState& b) {
    return a.z == b.z && a.iv == b.iv;
  }
  std::string str() const;
};

struct Counterexample {
  std::string kind;
  std::string detail;
};

struct SimulationReport {
  int64_t checkedN = 0;
  uint64_t concreteStateCount = 0;
  uint64_t concreteTransitionCount = 0;
  bool simulationHolds = true;
  bool strongestHolds = true;
  uint64_t skippedTuples = 0;
  std::vector<Counterexample> counterexamples;
  std::string to_json() const;
  std::string to_text() const;
};

// All Phi-satisfying configurations at fixed N within the arithmetic bounds,
// in deterministic order. Arithmetic arrays occurring only primed in tau are
// trimmed from the state vector (their primed values are per-transition
// choices). Prints nothing; bound adequacy notes go through `notes`.
std::vector<ConcreteState> enumerate_states(const SystemSpec& spec, int64_t N,
                                            const Options& opts,
                                            std::vector<std::string>* notes = nullptr);

void enumerate_transitions(
    const SystemSpec& spec, int64_t N, const Options& opts,
    const std::function<void(const ConcreteState&, const ConcreteState&)>& sink);

std::vector<int64_t> project_state(const SystemSpec& spec, const ConcreteState& s);

SimulationReport check_simulation(const SystemSpec& spec, const CounterSystem& cs, int64_t N,
                                  const Options& opts);
SimulationReport check_strongest(const SystemSpec& spec, const CounterSystem& cs, int64_t N,
                                 const Options& opts);

struct ReachResult {
  bool reachable = false;
  std::vector<AbstractState> trace; // init .. bad, when reachable
  uint64_t statesExplored = 0;
};

ReachResult bounded_reach(const CounterSystem& cs, int64_t N, const Formula& bad,
                          const Formula& strengthen, const Options& opts);

struct Grid {
  std::vector<std::tuple<Sym, int64_t, int64_t>> ranges;
  int64_t existsBound = 64;
};
struct EquivResult {
  bool equivalent = true;
  std::map<Sym, int64_t> counterexample;
};
EquivResult check_equiv_bounded(const Formula& fA, const Formula& fB, const Grid& grid);

// ---- compiled evaluator over abstract tuples (shared with acceptance) ----

struct CompiledCS {
  const CounterSystem* cs = nullptr;
  int nParams = 0, nInts = 0, nCtrs = 0, nLocals = 0;
  std::map<Sym, int> slot; // params | ints | ctrs | ints' | ctrs' | locals
  int nSlots = 0;
  struct CCon {
    logic::LinCon::K kind;
    int64_t k = 0, mod = 0;
    std::vector<std::pair<int, int64_t>> terms;
  };
  struct CDisj {
    std::vector<CCon> cons;
  };
  std::vector<CDisj> phi0, iota0, tau0;
  struct CLocal {
    bool functional = false;
    std::vector<std::pair<int, int64_t>> lin;
    int64_t k = 0, div = 1;
  };
  std::vector<CLocal> locals;

  void fill_locals(std::vector<int64_t>& slots) const;
  bool eval_disjunct(const CDisj& d, const std::vector<int64_t>& slots) const;
  bool eval_any(const std::vector<CDisj>& ds, std::vector<int64_t>& slots) const;
  // state formulas (phi0/iota0) at a single tuple
  bool eval_state(const std::vector<CDisj>& ds, int64_t N,
                  const std::map<std::string, int64_t>& params, const AbstractState& a) const;
  // tau0 at a tuple pair
  bool eval_pair(int64_t N, const std::map<std::string, int64_t>& params, const AbstractState& pre,
                 const AbstractState& post) const;
};

CompiledCS compile_cs(const CounterSystem& cs);

// nonnegative counter tuples summing to N (the realizability simplex) when the
// declared counters partition the full unprimed cell product bijectively
bool counters_are_cell_partition(const SystemSpec& spec);
std::vector<std::vector<int64_t>> simplex_tuples(int k, int64_t N);

// abstract intvar domains: constants compared against intvars in the
// counter system's atoms, plus {0,1}
std::vector<std::vector<int64_t>> abstract_intvar_domains(const CounterSystem& cs);

} // namespace ctrabs::oracle
