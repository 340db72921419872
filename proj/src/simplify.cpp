#include "ctrabs/simplify.hpp"

#include "ctrabs/linear.hpp"
#include "ctrabs/print.hpp"

#include <map>
#include <set>

namespace ctrabs::logic {

namespace {

// -1 unknown, 0 false, 1 true
int decide_atom(const Atom& a) {
  if (a.k == Atom::K::DataEqConst) return -1;
  if (a.k == Atom::K::DataEqArr) {
    if (a.arrA == a.arrB && a.primedA == a.primedB) return 1; // a(x) = a(x)
    return -1;
  }
  CardAbs cards;
  auto l = linearize(a.lhs, &cards), r = linearize(a.rhs, &cards);
  if (!l || !r) {
    // structural fallback: identical sides
    if (struct_eq(a.lhs, a.rhs)) {
      if (a.k == Atom::K::Cong) return 1;
      return a.op == CmpOp::Lt ? 0 : 1;
    }
    return -1;
  }
  Linear diff = *l;
  diff -= *r;
  LinCon c;
  c.lin = diff;
  if (a.k == Atom::K::Cong) {
    c.k = LinCon::K::Cong;
    c.mod = a.mod;
  } else {
    switch (a.op) {
      case CmpOp::Eq: c.k = LinCon::K::Eq; break;
      case CmpOp::Lt: c.k = LinCon::K::Lt; break;
      case CmpOp::Le: c.k = LinCon::K::Le; break;
    }
  }
  int dec = c.normalize();
  if (dec >= 0) return dec;
  // cardinality terms count sets: always nonnegative
  if (c.k == LinCon::K::Le) {
    bool allCard = true, allNegCoeff = true, allPosCoeff = true;
    for (const auto& [s, v] : c.lin.c) {
      if (s.kind != SymKind::Opaque) allCard = false;
      if (v > 0) allNegCoeff = false;
      if (v < 0) allPosCoeff = false;
    }
    if (allCard && !c.lin.c.empty()) {
      if (allNegCoeff && c.lin.k <= 0) return 1; // -Σcard + k <= 0 with k <= 0
      if (allPosCoeff && c.lin.k > 0) return 0;  // Σcard + k <= 0 with k > 0
    }
  }
  return -1;
}

std::string atom_key(const Atom& a) {
  // canonical-enough dedup key: linear form when available, else print
  if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
    CardAbs cards;
    auto l = linearize(a.lhs, &cards), r = linearize(a.rhs, &cards);
    if (l && r) {
      Linear diff = *l;
      diff -= *r;
      LinCon c;
      c.lin = diff;
      c.k = a.k == Atom::K::Cong  ? LinCon::K::Cong
            : a.op == CmpOp::Eq   ? LinCon::K::Eq
            : a.op == CmpOp::Lt   ? LinCon::K::Lt
                                  : LinCon::K::Le;
      if (a.k == Atom::K::Cong) c.mod = a.mod;
      c.normalize();
      std::string key = print_lincon(c);
      // opaque card slots are per-key local; append their meaning
      for (const auto& ck : cards.keys) key += "|" + ck;
      return key;
    }
  }
  return print_atom(a, nullptr);
}

struct Lit {
  bool neg;
  Formula f; // Atom node
};

// literal view of a simplified kid, if it is one
std::optional<Lit> as_literal(const Formula& f) {
  if (f->k == FNode::K::Atom) return Lit{false, f};
  if (f->k == FNode::K::Not && f->kids[0]->k == FNode::K::Atom) return Lit{true, f->kids[0]};
  return std::nullopt;
}

Formula simplify_rec(const Formula& f, const Vocab* vocab);

Formula simplify_junction(const Formula& f, const Vocab* vocab) {
  bool isAnd = f->k == FNode::K::And;
  Formula unitKill = isAnd ? f_false() : f_true(); // absorbing element
  std::vector<Formula> kids;
  for (const auto& rawKid : f->kids) {
    Formula kid = simplify_rec(rawKid, vocab);
    if (kid->k == (isAnd ? FNode::K::True : FNode::K::False)) continue;
    if (kid->k == (isAnd ? FNode::K::False : FNode::K::True)) return unitKill;
    if (kid->k == f->k) { // flatten
      for (const auto& g : kid->kids) kids.push_back(g);
    } else {
      kids.push_back(kid);
    }
  }
  // dedup + complementary literal detection
  std::vector<Formula> out;
  std::set<std::string> seen;
  std::set<std::string> posKeys, negKeys;
  for (const auto& kid : kids) {
    std::string key = print_formula(kid, nullptr);
    if (!seen.insert(key).second) continue;
    if (auto lit = as_literal(kid)) {
      std::string ak = atom_key(lit->f->atom);
      (lit->neg ? negKeys : posKeys).insert(ak);
      if ((lit->neg ? posKeys : negKeys).count(ak)) return unitKill; // p and !p
    }
    out.push_back(kid);
  }
  if (isAnd) {
    // value constraints per (array, primed, var): contradictions and, with a
    // vocab, exhaustively negated sorts
    std::map<std::tuple<int, bool, std::string>, std::set<int>> eq;
    std::map<std::tuple<int, bool, std::string>, std::set<int>> neq;
    for (const auto& kid : out) {
      auto lit = as_literal(kid);
      if (!lit || lit->f->atom.k != Atom::K::DataEqConst) continue;
      const Atom& a = lit->f->atom;
      auto key = std::make_tuple(a.arrA, a.primedA, a.var);
      (lit->neg ? neq : eq)[key].insert(a.valIdx);
    }
    for (const auto& [key, vals] : eq) {
      if (vals.size() > 1) return f_false(); // a(x)=v1 and a(x)=v2
      auto it = neq.find(key);
      if (it != neq.end() && it->second.count(*vals.begin())) return f_false();
    }
    if (vocab) {
      for (const auto& [key, vals] : neq) {
        int arr = std::get<0>(key);
        size_t sortSize = vocab->sorts.at(vocab->arrays.at(arr).sortIdx).values.size();
        if (vals.size() >= sortSize) return f_false(); // no value left
      }
    }
  }
  if (out.empty()) return isAnd ? f_true() : f_false();
  if (out.size() == 1) return out[0];
  return isAnd ? f_and(std::move(out)) : f_or(std::move(out));
}

Formula simplify_rec(const Formula& f, const Vocab* vocab) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      int dec = decide_atom(f->atom);
      if (dec == 0) return f_false();
      if (dec == 1) return f_true();
      return f;
    }
    case FNode::K::Not: {
      Formula kid = simplify_rec(f->kids[0], vocab);
      if (kid->k == FNode::K::True) return f_false();
      if (kid->k == FNode::K::False) return f_true();
      if (kid->k == FNode::K::Not) return kid->kids[0];
      return f_not(kid);
    }
    case FNode::K::And:
    case FNode::K::Or: return simplify_junction(f, vocab);
    case FNode::K::ForallProc: {
      Formula kid = simplify_rec(f->kids[0], vocab);
      if (kid->k == FNode::K::True) return f_true();
      // forall over an empty domain is true, but Proc has cardinality N >= 1
      // only in models; keep False under the quantifier unevaluated? N >= 1
      // always holds (Proc is a finite nonempty set sized by N >= 1): fold.
      if (kid->k == FNode::K::False) return f_false();
      return f_forall(f->var, kid);
    }
    case FNode::K::ExistsInt: {
      Formula kid = simplify_rec(f->kids[0], vocab);
      if (kid->k == FNode::K::True) return f_true();
      if (kid->k == FNode::K::False) return f_false();
      return f_exists_int(f->var, kid);
    }
  }
  return f;
}

} // namespace

Formula simplify(const Formula& f, const Vocab* vocab) { return simplify_rec(f, vocab); }

namespace {
void collect_atoms(const Formula& f, AtomListing& out, std::set<std::string>& seen) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      std::string key = atom_key(a);
      if (!seen.insert(key).second) return;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong)
        out.arithmetic.push_back(a);
      else
        out.data.push_back(a);
      return;
    }
    case FNode::K::Not:
    case FNode::K::And:
    case FNode::K::Or:
    case FNode::K::ForallProc:
    case FNode::K::ExistsInt:
      for (const auto& kid : f->kids) collect_atoms(kid, out, seen);
      return;
  }
}
} // namespace

AtomListing atoms_of(const Formula& f) {
  AtomListing out;
  std::set<std::string> seen;
  collect_atoms(f, out, seen);
  return out;
}

} // namespace ctrabs::logic
