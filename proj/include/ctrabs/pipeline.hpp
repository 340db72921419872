#pragma once

#include "ctrabs/qe.hpp"
#include "ctrabs/spec.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace ctrabs::pipe {

using front::SystemSpec;
using front::TransitionCase;
using logic::Formula;
using logic::Sym;
using logic::Term;
using logic::VocabPtr;

struct Budgets {
  size_t atoms = 24;     // all-SAT alphabet limit
  size_t cells = 4096;   // cell-space limit
  size_t qeRelax = 5000; // atom budget per disjunct before fm_real (relax mode)
};

// One auxiliary counter z_f per joint valuation of the in-scope enumerated
// arrays; scope arrays ordered by (name, primed), valuations enumerated
// lexicographically.
struct Cell {
  std::vector<int> vals;
  Sym sym;
};

struct CellSpace {
  std::vector<std::pair<int, bool>> scopeArrays; // (arrayIdx, primed)
  std::vector<Cell> cells;
  bool transScope = false;
};

CellSpace build_cells(const SystemSpec& spec, bool transScope, size_t cellBudget = 4096);

// does the cell's complete valuation satisfy the Data-formula?
bool cell_satisfies(const Formula& dataFormula, const CellSpace& cs, const Cell& cell);

struct CounterInfo {
  Sym sym;      // Counter or AutoCounter, possibly primed
  Formula body; // over the cell-space arrays
};

// z_i = sum of the cells whose valuation satisfies the body
std::vector<qe::LinCon> counters_as_cell_sums(const std::vector<CounterInfo>& counters,
                                              const CellSpace& cs);

// (a) N = sum over theta-satisfying cells, (b) partition law, (c) cells >= 0
std::vector<qe::LinCon> encode_forall_data(const Formula& theta, const CellSpace& cs);

struct Provenance {
  int phiDisjunct = -1;          // which Phi disjunct was conjoined (-1: none)
  std::vector<int> caseIdxs;     // surviving case indices
  std::vector<std::string> alpha; // the assignment's literal conjunction
};

struct Disjunct {
  qe::ConSet cons;
  Provenance prov;
};

struct PipelineStats {
  size_t cases = 0, atoms = 0, assignments = 0, survivorSets = 0, cells = 0;
  size_t disjunctsBeforePrune = 0, disjuncts = 0, prunedUnsat = 0;
  qe::ElimStats elim;
};

struct CounterSystem {
  VocabPtr vocab;
  std::vector<Sym> params, intvars, counters; // canonical v0 order (declaration order)
  std::vector<front::DerivedDef> locals;
  std::vector<Disjunct> phi0, iota0, tau0; // one empty disjunct = true; none = false
  bool exact = true;
  std::vector<std::pair<std::string, std::string>> autoCounters; // name -> body
  uint64_t specHash = 0;
  PipelineStats stats;
};

CounterSystem build_counter_system(const SystemSpec& spec, const Budgets& budgets = {},
                                   bool relax = false);

// spec-level operations, also exercised directly by tests ------------------

// Replaces arithmetic-array reads by existentially quantified integers and
// eliminates those exactly. A case may split into several (Cooper branches);
// all returned cases share the input's data part.
std::vector<TransitionCase> reverse_skolemize_case(const TransitionCase& tc,
                                                   const SystemSpec& spec,
                                                   qe::ElimStats* stats = nullptr);

// Card terms matching a declared counter body (up to binder renaming and
// Boolean normalization) become that counter symbol; unmatched terms get a
// fresh auto-declared counter, recorded in autoOut.
struct AutoCounters {
  std::vector<std::pair<std::string, std::string>> reported; // name -> body text
  std::vector<CounterInfo> defs;
};
Formula replace_counters(const Formula& f, const SystemSpec& spec, AutoCounters& autoOut);
Term replace_counters(const Term& t, const SystemSpec& spec, AutoCounters& autoOut);

// JSON dump / load (stable key order; atoms in DSL expression syntax)
nlohmann::ordered_json counter_system_json(const CounterSystem& cs);
std::string counter_system_dump(const CounterSystem& cs);
CounterSystem counter_system_load(const std::string& jsonText, const SystemSpec& spec);

} // namespace ctrabs::pipe
