#pragma once

// Compiled evaluator for quantifier-free arithmetic formulas over a fixed
// slot layout; fast enough for the exhaustive tuple-pair comparisons in the
// acceptance suite.

#include "ctrabs/formula.hpp"

#include <map>
#include <vector>

namespace th {

struct FEval {
  using Sym = ctrabs::logic::Sym;
  using Formula = ctrabs::logic::Formula;
  using Term = ctrabs::logic::Term;

  struct TNode {
    enum class K { Num, Slot, Add, Sub, Mul, Div } k;
    int64_t num = 0;
    int slot = -1;
    int a = -1, b = -1;
  };
  struct FNodeC {
    enum class K { True, False, Cmp, Cong, Not, And, Or } k;
    int op = 0; // 0 eq, 1 lt, 2 le
    int64_t mod = 0;
    int lhs = -1, rhs = -1; // term indices
    std::vector<int> kids;  // formula indices
  };
  std::vector<TNode> terms;
  std::vector<FNodeC> nodes;
  int root = -1;

  int compile_term(const Term& t, const std::map<Sym, int>& slots) {
    using TK = ctrabs::logic::TermNode::K;
    TNode n;
    switch (t->k) {
      case TK::Num:
        n.k = TNode::K::Num;
        n.num = (int64_t)t->num;
        break;
      case TK::SymRef:
        n.k = TNode::K::Slot;
        n.slot = slots.at(t->sym);
        break;
      case TK::Add:
        n.k = TNode::K::Add;
        n.a = compile_term(t->a, slots);
        n.b = compile_term(t->b, slots);
        break;
      case TK::Sub:
        n.k = TNode::K::Sub;
        n.a = compile_term(t->a, slots);
        n.b = compile_term(t->b, slots);
        break;
      case TK::Mul:
        n.k = TNode::K::Mul;
        n.num = (int64_t)t->num;
        n.a = compile_term(t->a, slots);
        break;
      case TK::FloorDiv:
        n.k = TNode::K::Div;
        n.num = (int64_t)t->num;
        n.a = compile_term(t->a, slots);
        break;
      default: throw std::runtime_error("FEval: reads/cards not supported");
    }
    terms.push_back(n);
    return (int)terms.size() - 1;
  }

  int compile(const Formula& f, const std::map<Sym, int>& slots) {
    using FK = ctrabs::logic::FNode::K;
    using AK = ctrabs::logic::Atom::K;
    FNodeC n;
    switch (f->k) {
      case FK::True: n.k = FNodeC::K::True; break;
      case FK::False: n.k = FNodeC::K::False; break;
      case FK::Atom: {
        const auto& a = f->atom;
        if (a.k == AK::Cong) {
          n.k = FNodeC::K::Cong;
          n.mod = (int64_t)a.mod;
        } else if (a.k == AK::Cmp) {
          n.k = FNodeC::K::Cmp;
          n.op = a.op == ctrabs::logic::CmpOp::Eq ? 0 : a.op == ctrabs::logic::CmpOp::Lt ? 1 : 2;
        } else {
          throw std::runtime_error("FEval: data atom");
        }
        n.lhs = compile_term(a.lhs, slots);
        n.rhs = compile_term(a.rhs, slots);
        break;
      }
      case FK::Not:
        n.k = FNodeC::K::Not;
        n.kids.push_back(compile(f->kids[0], slots));
        break;
      case FK::And:
      case FK::Or:
        n.k = f->k == FK::And ? FNodeC::K::And : FNodeC::K::Or;
        for (const auto& kid : f->kids) n.kids.push_back(compile(kid, slots));
        break;
      default: throw std::runtime_error("FEval: quantifier");
    }
    nodes.push_back(n);
    return (int)nodes.size() - 1;
  }

  void set_root(const Formula& f, const std::map<Sym, int>& slots) { root = compile(f, slots); }

  int64_t eval_term(int idx, const std::vector<int64_t>& slots) const {
    const TNode& n = terms[idx];
    switch (n.k) {
      case TNode::K::Num: return n.num;
      case TNode::K::Slot: return slots[n.slot];
      case TNode::K::Add: return eval_term(n.a, slots) + eval_term(n.b, slots);
      case TNode::K::Sub: return eval_term(n.a, slots) - eval_term(n.b, slots);
      case TNode::K::Mul: return n.num * eval_term(n.a, slots);
      case TNode::K::Div: return ctrabs::floor_div64(eval_term(n.a, slots), n.num);
    }
    return 0;
  }

  bool eval_node(int idx, const std::vector<int64_t>& slots) const {
    const FNodeC& n = nodes[idx];
    switch (n.k) {
      case FNodeC::K::True: return true;
      case FNodeC::K::False: return false;
      case FNodeC::K::Cmp: {
        int64_t l = eval_term(n.lhs, slots), r = eval_term(n.rhs, slots);
        return n.op == 0 ? l == r : n.op == 1 ? l < r : l <= r;
      }
      case FNodeC::K::Cong:
        return ctrabs::pos_mod64(eval_term(n.lhs, slots) - eval_term(n.rhs, slots), n.mod) == 0;
      case FNodeC::K::Not: return !eval_node(n.kids[0], slots);
      case FNodeC::K::And:
        for (int k : n.kids)
          if (!eval_node(k, slots)) return false;
        return true;
      case FNodeC::K::Or:
        for (int k : n.kids)
          if (eval_node(k, slots)) return true;
        return false;
    }
    return false;
  }

  bool eval(const std::vector<int64_t>& slots) const { return eval_node(root, slots); }
};

} // namespace th
