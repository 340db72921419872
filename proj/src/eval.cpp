#include "ctrabs/eval.hpp"

#include "ctrabs/print.hpp"

namespace ctrabs::logic {

static int64_t read_array(int arrayIdx, bool primed, int64_t proc, EvalCtx& ctx) {
  const ConcreteState* st = primed ? ctx.post : ctx.pre;
  if (!st) fail(ErrKind::UnboundSymbol, "no state for " + std::string(primed ? "primed" : "unprimed") + " array read");
  if (arrayIdx < 0 || (size_t)arrayIdx >= st->arrs.size() || st->arrs[arrayIdx].empty())
    fail(ErrKind::UnboundSymbol, "array " + std::to_string(arrayIdx) + " has no valuation in state");
  return st->arrs[arrayIdx].at((size_t)proc);
}

int64_t eval_term(const Term& t, EvalCtx& ctx) {
  switch (t->k) {
    case TermNode::K::Num: return (int64_t)t->num;
    case TermNode::K::SymRef: {
      auto it = ctx.symEnv.find(t->sym);
      if (it != ctx.symEnv.end()) return it->second;
      const Sym& s = t->sym;
      if (s.kind == SymKind::Param) {
        const ConcreteState* st = ctx.pre ? ctx.pre : ctx.post;
        if (st) {
          auto p = st->params.find(s.name);
          if (p != st->params.end()) return p->second;
        }
      } else if (s.kind == SymKind::IntVar) {
        const ConcreteState* st = s.primed ? ctx.post : ctx.pre;
        if (st) {
          auto p = st->ints.find(s.name);
          if (p != st->ints.end()) return p->second;
        }
      }
      fail(ErrKind::UnboundSymbol, "unbound symbol " + print_sym(s));
    }
    case TermNode::K::Read: {
      auto it = ctx.procVars.find(t->var);
      if (it == ctx.procVars.end()) fail(ErrKind::UnboundSymbol, "unbound Proc variable " + t->var);
      return read_array(t->array, t->primed, it->second, ctx);
    }
    case TermNode::K::Card: {
      const ConcreteState* st = ctx.pre ? ctx.pre : ctx.post;
      if (!st) fail(ErrKind::UnboundSymbol, "cardinality needs a state");
      int64_t cnt = 0;
      auto saved = ctx.procVars.find(t->var);
      bool had = saved != ctx.procVars.end();
      int64_t old = had ? saved->second : 0;
      for (int64_t k = 0; k < st->n; ++k) {
        ctx.procVars[t->var] = k;
        if (eval_formula(t->body, ctx)) ++cnt;
      }
      if (had)
        ctx.procVars[t->var] = old;
      else
        ctx.procVars.erase(t->var);
      return cnt;
    }
    case TermNode::K::Add: return eval_term(t->a, ctx) + eval_term(t->b, ctx);
    case TermNode::K::Sub: return eval_term(t->a, ctx) - eval_term(t->b, ctx);
    case TermNode::K::Mul: return (int64_t)t->num * eval_term(t->a, ctx);
    case TermNode::K::FloorDiv: {
      int64_t d = (int64_t)t->num;
      if (d == 0) fail(ErrKind::NonConstantDivisor, "division by zero");
      return floor_div64(eval_term(t->a, ctx), d);
    }
  }
  fail(ErrKind::Internal, "eval_term fell through");
}

bool eval_formula(const Formula& f, EvalCtx& ctx) {
  switch (f->k) {
    case FNode::K::True: return true;
    case FNode::K::False: return false;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      switch (a.k) {
        case Atom::K::Cmp: {
          int64_t l = eval_term(a.lhs, ctx), r = eval_term(a.rhs, ctx);
          switch (a.op) {
            case CmpOp::Eq: return l == r;
            case CmpOp::Lt: return l < r;
            case CmpOp::Le: return l <= r;
          }
          return false;
        }
        case Atom::K::Cong: {
          int64_t l = eval_term(a.lhs, ctx), r = eval_term(a.rhs, ctx);
          return pos_mod64(l - r, (int64_t)a.mod) == 0;
        }
        case Atom::K::DataEqConst: {
          auto it = ctx.procVars.find(a.var);
          if (it == ctx.procVars.end())
            fail(ErrKind::UnboundSymbol, "unbound Proc variable " + a.var);
          return read_array(a.arrA, a.primedA, it->second, ctx) == a.valIdx;
        }
        case Atom::K::DataEqArr: {
          auto it = ctx.procVars.find(a.var);
          if (it == ctx.procVars.end())
            fail(ErrKind::UnboundSymbol, "unbound Proc variable " + a.var);
          return read_array(a.arrA, a.primedA, it->second, ctx) ==
                 read_array(a.arrB, a.primedB, it->second, ctx);
        }
      }
      return false;
    }
    case FNode::K::Not: return !eval_formula(f->kids[0], ctx);
    case FNode::K::And:
      for (const auto& kid : f->kids)
        if (!eval_formula(kid, ctx)) return false;
      return true;
    case FNode::K::Or:
      for (const auto& kid : f->kids)
        if (eval_formula(kid, ctx)) return true;
      return false;
    case FNode::K::ForallProc: {
      const ConcreteState* st = ctx.pre ? ctx.pre : ctx.post;
      if (!st) fail(ErrKind::UnboundSymbol, "forall needs a state");
      auto saved = ctx.procVars.find(f->var);
      bool had = saved != ctx.procVars.end();
      int64_t old = had ? saved->second : 0;
      bool ok = true;
      for (int64_t k = 0; k < st->n && ok; ++k) {
        ctx.procVars[f->var] = k;
        ok = eval_formula(f->kids[0], ctx);
      }
      if (had)
        ctx.procVars[f->var] = old;
      else
        ctx.procVars.erase(f->var);
      return ok;
    }
    case FNode::K::ExistsInt: {
      if (ctx.existsBound < 0)
        fail(ErrKind::UnboundedExistential,
             "ExistsInt over " + f->var + " evaluated without a search bound");
      Sym s{SymKind::Derived, f->var, false};
      auto saved = ctx.symEnv.find(s);
      bool had = saved != ctx.symEnv.end();
      int64_t old = had ? saved->second : 0;
      bool ok = false;
      for (int64_t v = -ctx.existsBound; v <= ctx.existsBound && !ok; ++v) {
        ctx.symEnv[s] = v;
        ok = eval_formula(f->kids[0], ctx);
      }
      if (had)
        ctx.symEnv[s] = old;
      else
        ctx.symEnv.erase(s);
      return ok;
    }
  }
  fail(ErrKind::Internal, "eval_formula fell through");
}

} // namespace ctrabs::logic
