#pragma once

#include "ctrabs/formula.hpp"

#include <vector>

namespace ctrabs::logic {

// Equivalence-preserving rewrites: constant folding, And/Or flattening, unit
// laws, duplicate and complementary literals, ground numeric atoms, data-atom
// contradictions within a conjunction. Supplying the vocab enables
// sort-exhaustiveness reasoning on data atoms.
Formula simplify(const Formula& f, const Vocab* vocab = nullptr);

// Deterministic, duplicate-free listing of the atoms of f in first-occurrence
// order of a left-to-right traversal.
struct AtomListing {
  std::vector<Atom> arithmetic; // Cmp / Cong
  std::vector<Atom> data;       // DataEqConst / DataEqArr
};
AtomListing atoms_of(const Formula& f);

} // namespace ctrabs::logic
