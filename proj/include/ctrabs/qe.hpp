#pragma once

#include "ctrabs/linear.hpp"

#include <functional>
#include <optional>

namespace ctrabs::qe {

using ctrabs::Int;
using logic::LinCon;
using logic::Linear;
using logic::Sym;

// Conjunction of linear constraints over integer symbols.
struct ConSet {
  std::vector<LinCon> cons;
  bool mentions(const Sym& x) const;
  size_t atom_count() const { return cons.size(); }
};

// Disjunction of conjunctions. Empty vector = false.
struct ConSets {
  std::vector<ConSet> sets;
  size_t atom_count() const;
};

// Normalizes every constraint, merges same-linear bounds, detects decided
// constraints. Returns false when the set is proven unsatisfiable.
bool simplify_conset(ConSet& c);
void sort_conset(ConSet& c);

std::optional<ConSet> try_substitution(const Sym& x, const ConSet& c);
ConSets cooper(const Sym& x, const ConSet& c);
ConSet fm_real(const Sym& x, const ConSet& c);

enum class Policy { Exact, RelaxOnBudget };

struct ElimStats {
  long substitutions = 0;
  long coopers = 0;
  long fms = 0;
  long zeroForced = 0;
  size_t maxIntermediate = 0;
};

struct ElimResult {
  ConSets sets;
  bool exact = true;
};

ElimResult eliminate_int_var(const Sym& x, const ConSet& c, Policy policy,
                             size_t relaxBudget = 5000, ElimStats* stats = nullptr);

// Eliminates every symbol matched by `target` from every disjunct.
// Order heuristic: zero-forced first, then substitution-eligible, then
// fewest occurrences (Cooper). Symbols matched by `substOnly` (derived
// locals) are eliminated only when a unit equality allows it.
ElimResult eliminate_all(ConSets in, const std::function<bool(const Sym&)>& target,
                         Policy policy, size_t relaxBudget = 5000, ElimStats* stats = nullptr,
                         const std::function<bool(const Sym&)>& substOnly = nullptr);

// Sound unsatisfiability provers used for disjunct pruning.
bool interval_unsat(const ConSet& c, int maxRounds = 200);
bool fm_ground_unsat(const ConSet& c, size_t cap = 4000);

// Direct evaluation (tests, bounded oracles).
bool eval_lincon(const LinCon& c, const std::map<Sym, Int>& env);
bool eval_conset(const ConSet& c, const std::map<Sym, Int>& env);
bool eval_consets(const ConSets& c, const std::map<Sym, Int>& env);

} // namespace ctrabs::qe
