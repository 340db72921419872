#include "ctrabs/formula.hpp"

namespace ctrabs::logic {

Term t_num(Int v) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Num;
  n->num = std::move(v);
  return n;
}
Term t_sym(Sym s) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::SymRef;
  n->sym = std::move(s);
  return n;
}
Term t_read(int array, bool primed, std::string var) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Read;
  n->array = array;
  n->primed = primed;
  n->var = std::move(var);
  return n;
}
Term t_card(std::string boundVar, Formula body) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Card;
  n->var = std::move(boundVar);
  n->body = std::move(body);
  return n;
}
Term t_add(Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Add;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
Term t_sub(Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Sub;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
Term t_mul(Int scalar, Term a) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::Mul;
  n->num = std::move(scalar);
  n->a = std::move(a);
  return n;
}
Term t_floordiv(Term a, Int divisor) {
  auto n = std::make_shared<TermNode>();
  n->k = TermNode::K::FloorDiv;
  n->num = std::move(divisor);
  n->a = std::move(a);
  return n;
}

Atom a_cmp(CmpOp op, Term l, Term r) {
  Atom a;
  a.k = Atom::K::Cmp;
  a.op = op;
  a.lhs = std::move(l);
  a.rhs = std::move(r);
  return a;
}
Atom a_cong(Term l, Term r, Int mod) {
  Atom a;
  a.k = Atom::K::Cong;
  a.lhs = std::move(l);
  a.rhs = std::move(r);
  a.mod = std::move(mod);
  return a;
}
Atom a_data_const(int arr, bool primed, std::string var, int valIdx) {
  Atom a;
  a.k = Atom::K::DataEqConst;
  a.arrA = arr;
  a.primedA = primed;
  a.var = std::move(var);
  a.valIdx = valIdx;
  return a;
}
Atom a_data_arr(int arrA, bool primedA, int arrB, bool primedB, std::string var) {
  Atom a;
  a.k = Atom::K::DataEqArr;
  a.arrA = arrA;
  a.primedA = primedA;
  a.arrB = arrB;
  a.primedB = primedB;
  a.var = std::move(var);
  return a;
}

Formula f_true() {
  static Formula t = [] {
    auto n = std::make_shared<FNode>();
    n->k = FNode::K::True;
    return Formula(n);
  }();
  return t;
}
Formula f_false() {
  static Formula t = [] {
    auto n = std::make_shared<FNode>();
    n->k = FNode::K::False;
    return Formula(n);
  }();
  return t;
}
Formula f_atom(Atom a) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::Atom;
  n->atom = std::move(a);
  return n;
}
Formula f_not(Formula f) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::Not;
  n->kids.push_back(std::move(f));
  return n;
}
Formula f_and(std::vector<Formula> kids) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::And;
  n->kids = std::move(kids);
  return n;
}
Formula f_or(std::vector<Formula> kids) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::Or;
  n->kids = std::move(kids);
  return n;
}
Formula f_forall(std::string var, Formula f) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::ForallProc;
  n->var = std::move(var);
  n->kids.push_back(std::move(f));
  return n;
}
Formula f_exists_int(std::string var, Formula f) {
  auto n = std::make_shared<FNode>();
  n->k = FNode::K::ExistsInt;
  n->var = std::move(var);
  n->kids.push_back(std::move(f));
  return n;
}

bool struct_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  switch (a->k) {
    case TermNode::K::Num: return a->num == b->num;
    case TermNode::K::SymRef: return a->sym == b->sym;
    case TermNode::K::Read:
      return a->array == b->array && a->primed == b->primed && a->var == b->var;
    case TermNode::K::Card: return a->var == b->var && struct_eq(a->body, b->body);
    case TermNode::K::Add:
    case TermNode::K::Sub: return struct_eq(a->a, b->a) && struct_eq(a->b, b->b);
    case TermNode::K::Mul:
    case TermNode::K::FloorDiv: return a->num == b->num && struct_eq(a->a, b->a);
  }
  return false;
}

bool atom_eq(const Atom& a, const Atom& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case Atom::K::Cmp:
      return a.op == b.op && struct_eq(a.lhs, b.lhs) && struct_eq(a.rhs, b.rhs);
    case Atom::K::Cong:
      return a.mod == b.mod && struct_eq(a.lhs, b.lhs) && struct_eq(a.rhs, b.rhs);
    case Atom::K::DataEqConst:
      return a.arrA == b.arrA && a.primedA == b.primedA && a.var == b.var && a.valIdx == b.valIdx;
    case Atom::K::DataEqArr:
      return a.arrA == b.arrA && a.primedA == b.primedA && a.arrB == b.arrB &&
             a.primedB == b.primedB && a.var == b.var;
  }
  return false;
}

bool struct_eq(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  switch (a->k) {
    case FNode::K::True:
    case FNode::K::False: return true;
    case FNode::K::Atom: return atom_eq(a->atom, b->atom);
    case FNode::K::Not: return struct_eq(a->kids[0], b->kids[0]);
    case FNode::K::And:
    case FNode::K::Or: {
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!struct_eq(a->kids[i], b->kids[i])) return false;
      return true;
    }
    case FNode::K::ForallProc:
    case FNode::K::ExistsInt:
      return a->var == b->var && struct_eq(a->kids[0], b->kids[0]);
  }
  return false;
}

static void collect_free(const Term& t, FreeSymbols& out);

static void collect_free(const Formula& f, FreeSymbols& out) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
        collect_free(a.lhs, out);
        collect_free(a.rhs, out);
      } else {
        out.arrays.insert({a.arrA, a.primedA});
        if (a.k == Atom::K::DataEqArr) out.arrays.insert({a.arrB, a.primedB});
      }
      return;
    }
    case FNode::K::Not:
    case FNode::K::And:
    case FNode::K::Or:
      for (const auto& kid : f->kids) collect_free(kid, out);
      return;
    case FNode::K::ForallProc:
      collect_free(f->kids[0], out);
      return;
    case FNode::K::ExistsInt: {
      FreeSymbols inner;
      collect_free(f->kids[0], inner);
      Sym bound{SymKind::Skolem, f->var, false};
      for (auto& s : inner.syms)
        if (s.name != f->var) out.syms.insert(s);
      (void)bound;
      for (auto& ar : inner.arrays) out.arrays.insert(ar);
      out.hasCard = out.hasCard || inner.hasCard;
      return;
    }
  }
}

static void collect_free(const Term& t, FreeSymbols& out) {
  switch (t->k) {
    case TermNode::K::Num: return;
    case TermNode::K::SymRef: out.syms.insert(t->sym); return;
    case TermNode::K::Read: out.arrays.insert({t->array, t->primed}); return;
    case TermNode::K::Card: {
      out.hasCard = true;
      collect_free(t->body, out);
      return;
    }
    case TermNode::K::Add:
    case TermNode::K::Sub:
      collect_free(t->a, out);
      collect_free(t->b, out);
      return;
    case TermNode::K::Mul:
    case TermNode::K::FloorDiv: collect_free(t->a, out); return;
  }
}

FreeSymbols free_symbols(const Formula& f) {
  FreeSymbols out;
  collect_free(f, out);
  return out;
}
FreeSymbols free_symbols(const Term& t) {
  FreeSymbols out;
  collect_free(t, out);
  return out;
}

Term substitute(const Term& t, const Substitution& s) {
  switch (t->k) {
    case TermNode::K::Num: return t;
    case TermNode::K::SymRef: {
      auto it = s.syms.find(t->sym);
      return it == s.syms.end() ? t : it->second;
    }
    case TermNode::K::Read: {
      auto it = s.reads.find({t->array, t->primed});
      return it == s.reads.end() ? t : t_sym(it->second);
    }
    case TermNode::K::Card: return t_card(t->var, substitute(t->body, s));
    case TermNode::K::Add: return t_add(substitute(t->a, s), substitute(t->b, s));
    case TermNode::K::Sub: return t_sub(substitute(t->a, s), substitute(t->b, s));
    case TermNode::K::Mul: return t_mul(t->num, substitute(t->a, s));
    case TermNode::K::FloorDiv: return t_floordiv(substitute(t->a, s), t->num);
  }
  return t;
}

Formula substitute(const Formula& f, const Substitution& s) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      Atom a = f->atom;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
        a.lhs = substitute(a.lhs, s);
        a.rhs = substitute(a.rhs, s);
      }
      return f_atom(std::move(a));
    }
    case FNode::K::Not: return f_not(substitute(f->kids[0], s));
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      for (const auto& kid : f->kids) kids.push_back(substitute(kid, s));
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FNode::K::ForallProc: return f_forall(f->var, substitute(f->kids[0], s));
    case FNode::K::ExistsInt: {
      Substitution inner = s;
      for (auto it = inner.syms.begin(); it != inner.syms.end();) {
        if (it->first.name == f->var)
          it = inner.syms.erase(it);
        else
          ++it;
      }
      return f_exists_int(f->var, substitute(f->kids[0], inner));
    }
  }
  return f;
}

Term prime_state(const Term& t) {
  switch (t->k) {
    case TermNode::K::Num: return t;
    case TermNode::K::SymRef: {
      Sym s = t->sym;
      if (s.kind == SymKind::IntVar || s.kind == SymKind::Counter ||
          s.kind == SymKind::AutoCounter)
        s.primed = true;
      return t_sym(s);
    }
    case TermNode::K::Read: return t_read(t->array, true, t->var);
    case TermNode::K::Card: return t_card(t->var, prime_state(t->body));
    case TermNode::K::Add: return t_add(prime_state(t->a), prime_state(t->b));
    case TermNode::K::Sub: return t_sub(prime_state(t->a), prime_state(t->b));
    case TermNode::K::Mul: return t_mul(t->num, prime_state(t->a));
    case TermNode::K::FloorDiv: return t_floordiv(prime_state(t->a), t->num);
  }
  return t;
}

Formula prime_state(const Formula& f) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      Atom a = f->atom;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
        a.lhs = prime_state(a.lhs);
        a.rhs = prime_state(a.rhs);
      } else {
        a.primedA = true;
        if (a.k == Atom::K::DataEqArr) a.primedB = true;
      }
      return f_atom(std::move(a));
    }
    case FNode::K::Not: return f_not(prime_state(f->kids[0]));
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      for (const auto& kid : f->kids) kids.push_back(prime_state(kid));
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FNode::K::ForallProc: return f_forall(f->var, prime_state(f->kids[0]));
    case FNode::K::ExistsInt: return f_exists_int(f->var, prime_state(f->kids[0]));
  }
  return f;
}

static Term rename_proc_var(const Term& t, const std::string& from, const std::string& to) {
  switch (t->k) {
    case TermNode::K::Num:
    case TermNode::K::SymRef: return t;
    case TermNode::K::Read:
      return t->var == from ? t_read(t->array, t->primed, to) : t;
    case TermNode::K::Card:
      // the card's own binder shadows
      return t->var == from ? t : t_card(t->var, rename_proc_var(t->body, from, to));
    case TermNode::K::Add:
      return t_add(rename_proc_var(t->a, from, to), rename_proc_var(t->b, from, to));
    case TermNode::K::Sub:
      return t_sub(rename_proc_var(t->a, from, to), rename_proc_var(t->b, from, to));
    case TermNode::K::Mul: return t_mul(t->num, rename_proc_var(t->a, from, to));
    case TermNode::K::FloorDiv: return t_floordiv(rename_proc_var(t->a, from, to), t->num);
  }
  return t;
}

Formula rename_proc_var(const Formula& f, const std::string& from, const std::string& to) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      Atom a = f->atom;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
        a.lhs = rename_proc_var(a.lhs, from, to);
        a.rhs = rename_proc_var(a.rhs, from, to);
      } else if (a.var == from) {
        a.var = to;
      }
      return f_atom(std::move(a));
    }
    case FNode::K::Not: return f_not(rename_proc_var(f->kids[0], from, to));
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      for (const auto& kid : f->kids) kids.push_back(rename_proc_var(kid, from, to));
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FNode::K::ForallProc:
      return f->var == from ? f : f_forall(f->var, rename_proc_var(f->kids[0], from, to));
    case FNode::K::ExistsInt:
      return f_exists_int(f->var, rename_proc_var(f->kids[0], from, to));
  }
  return f;
}

} // namespace ctrabs::logic
