#include "ctrabs/parser.hpp"
#include "ctrabs/print.hpp"
#include "ctrabs/simplify.hpp"

#include <map>
#include <set>

namespace ctrabs::front {

using namespace ctrabs::logic;

namespace {

struct Resolver {
  const Vocab* v;
  bool allowPrimed = false; // primed state symbols / reads (trans cases only)
  bool allowReads = true;   // false in safety formulas
  bool allowCard = true;    // false inside card/counter bodies (no nesting)
  bool dataOnly = false;    // card/counter bodies: Data-formulae only
  std::string procVar;      // the case variable; empty in discovery mode
  bool discover = false;
  std::string cardVar; // binder while inside a card body
  const std::set<std::string>* derivedNames = nullptr;
  std::map<std::string, std::pair<int, int>> valueLookup; // value -> (sort, idx)

  void init_values() {
    for (size_t si = 0; si < v->sorts.size(); ++si)
      for (size_t vi = 0; vi < v->sorts[si].values.size(); ++vi)
        valueLookup[v->sorts[si].values[vi]] = {(int)si, (int)vi};
  }

  void check_read_var(const std::string& var, const Pos& pos) {
    if (!cardVar.empty()) {
      if (var != cardVar)
        fail(ErrKind::FragmentViolation,
             "array read at '" + var + "' inside a cardinality term bound to '" + cardVar + "'",
             pos.line, pos.col);
      return;
    }
    if (discover && procVar.empty()) {
      procVar = var;
      return;
    }
    if (var != procVar)
      fail(ErrKind::FragmentViolation,
           "array read at Proc-variable '" + var + "': a case may use only the single variable '" +
               (procVar.empty() ? "?" : procVar) + "'",
           pos.line, pos.col);
  }

  struct Side {
    enum class T { IntTerm, EnumRead, EnumValue } t;
    Term term;
    int array = -1;
    bool primed = false;
    std::string var;
    int sortIdx = -1, valIdx = -1;
  };

  Side resolve_side(const SExprP& e) {
    switch (e->k) {
      case SExpr::K::Num: return {Side::T::IntTerm, t_num(e->num)};
      case SExpr::K::Neg: {
        Side s = resolve_side(e->kids[0]);
        require_int(s, e->pos);
        return {Side::T::IntTerm, t_mul(-1, s.term)};
      }
      case SExpr::K::Ident: {
        auto val = valueLookup.find(e->name);
        if (val != valueLookup.end()) {
          if (e->primed)
            fail(ErrKind::SortMismatch, "sort values cannot be primed", e->pos.line, e->pos.col);
          Side s;
          s.t = Side::T::EnumValue;
          s.sortIdx = val->second.first;
          s.valIdx = val->second.second;
          return s;
        }
        if (v->param_index(e->name) >= 0) {
          if (e->primed)
            fail(ErrKind::FragmentViolation, "parameters cannot be primed", e->pos.line,
                 e->pos.col);
          return {Side::T::IntTerm, t_sym({SymKind::Param, e->name, false})};
        }
        if (v->intvar_index(e->name) >= 0) {
          if (e->primed && !allowPrimed)
            fail(ErrKind::FragmentViolation, "primed symbol '" + e->name + "'' not allowed here",
                 e->pos.line, e->pos.col);
          return {Side::T::IntTerm, t_sym({SymKind::IntVar, e->name, e->primed})};
        }
        if (v->counter_index(e->name) >= 0) {
          if (e->primed && !allowPrimed)
            fail(ErrKind::FragmentViolation, "primed symbol '" + e->name + "'' not allowed here",
                 e->pos.line, e->pos.col);
          if (dataOnly)
            fail(ErrKind::FragmentViolation, "counter '" + e->name + "' inside a Data-formula",
                 e->pos.line, e->pos.col);
          return {Side::T::IntTerm, t_sym({SymKind::Counter, e->name, e->primed})};
        }
        if (derivedNames && derivedNames->count(e->name)) {
          if (e->primed)
            fail(ErrKind::FragmentViolation, "derived locals cannot be primed", e->pos.line,
                 e->pos.col);
          return {Side::T::IntTerm, t_sym({SymKind::Derived, e->name, false})};
        }
        if (e->name == procVar || e->name == cardVar)
          fail(ErrKind::SortMismatch, "Proc-variable '" + e->name + "' used as an integer",
               e->pos.line, e->pos.col);
        if (v->array_index(e->name) >= 0)
          fail(ErrKind::SortMismatch, "array-id '" + e->name + "' used without an index",
               e->pos.line, e->pos.col);
        fail(ErrKind::UnknownSymbol, "unknown symbol '" + e->name + "'", e->pos.line, e->pos.col);
      }
      case SExpr::K::Apply: {
        int ai = v->array_index(e->name);
        if (ai < 0)
          fail(ErrKind::UnknownSymbol, "unknown array-id '" + e->name + "'", e->pos.line,
               e->pos.col);
        if (!allowReads)
          fail(ErrKind::FragmentViolation,
               "array '" + e->name + "' not allowed here (arithmetic formula over counters, "
               "integer variables and parameters only)",
               e->pos.line, e->pos.col);
        if (e->primed && !allowPrimed)
          fail(ErrKind::FragmentViolation, "primed read '" + e->name + "'' not allowed here",
               e->pos.line, e->pos.col);
        const std::string& var = e->kids[0]->name;
        check_read_var(var, e->kids[0]->pos);
        if (v->arrays[ai].kind == ArrayKind::Arithmetic) {
          if (dataOnly)
            fail(ErrKind::FragmentViolation,
                 "arithmetic array-id '" + e->name + "' inside a Data-formula", e->pos.line,
                 e->pos.col);
          return {Side::T::IntTerm, t_read(ai, e->primed, var)};
        }
        Side s;
        s.t = Side::T::EnumRead;
        s.array = ai;
        s.primed = e->primed;
        s.var = var;
        s.sortIdx = v->arrays[ai].sortIdx;
        return s;
      }
      case SExpr::K::Card: {
        if (!allowCard || dataOnly)
          fail(ErrKind::FragmentViolation, "cardinality term not allowed here (no nesting)",
               e->pos.line, e->pos.col);
        Resolver inner = *this;
        inner.dataOnly = true;
        inner.allowCard = false;
        inner.cardVar = e->name;
        Formula body = inner.resolve_formula(e->kids[0]);
        return {Side::T::IntTerm, t_card(e->name, body)};
      }
      case SExpr::K::Add:
      case SExpr::K::Sub: {
        Side a = resolve_side(e->kids[0]), b = resolve_side(e->kids[1]);
        require_int(a, e->kids[0]->pos);
        require_int(b, e->kids[1]->pos);
        return {Side::T::IntTerm, e->k == SExpr::K::Add ? t_add(a.term, b.term)
                                                        : t_sub(a.term, b.term)};
      }
      case SExpr::K::Mul: {
        Side a = resolve_side(e->kids[0]), b = resolve_side(e->kids[1]);
        require_int(a, e->kids[0]->pos);
        require_int(b, e->kids[1]->pos);
        if (a.term->k == TermNode::K::Num) return {Side::T::IntTerm, t_mul(a.term->num, b.term)};
        if (b.term->k == TermNode::K::Num) return {Side::T::IntTerm, t_mul(b.term->num, a.term)};
        fail(ErrKind::SortMismatch, "multiplication requires a numeral factor", e->pos.line,
             e->pos.col);
      }
      case SExpr::K::Div: {
        Side a = resolve_side(e->kids[0]);
        require_int(a, e->kids[0]->pos);
        if (e->kids[1]->k != SExpr::K::Num)
          fail(ErrKind::NonConstantDivisor, "'div' requires a numeral divisor",
               e->kids[1]->pos.line, e->kids[1]->pos.col);
        return {Side::T::IntTerm, t_floordiv(a.term, e->kids[1]->num)};
      }
      default:
        fail(ErrKind::SortMismatch, "expected a term", e->pos.line, e->pos.col);
    }
  }

  void require_int(const Side& s, const Pos& pos) {
    if (s.t != Side::T::IntTerm)
      fail(ErrKind::SortMismatch, "Data-sorted operand in an arithmetic context", pos.line,
           pos.col);
  }

  Formula resolve_formula(const SExprP& e) {
    switch (e->k) {
      case SExpr::K::True: return f_true();
      case SExpr::K::False: return f_false();
      case SExpr::K::Not: return f_not(resolve_formula(e->kids[0]));
      case SExpr::K::And:
      case SExpr::K::Or: {
        std::vector<Formula> kids;
        kids.reserve(e->kids.size());
        for (const auto& kid : e->kids) kids.push_back(resolve_formula(kid));
        return e->k == SExpr::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
      }
      case SExpr::K::Cong: {
        if (e->num < 2)
          fail(ErrKind::SortMismatch, "congruence modulus must be at least 2", e->pos.line,
               e->pos.col);
        if (dataOnly)
          fail(ErrKind::FragmentViolation, "arithmetic atom inside a Data-formula", e->pos.line,
               e->pos.col);
        Side a = resolve_side(e->kids[0]), b = resolve_side(e->kids[1]);
        require_int(a, e->kids[0]->pos);
        require_int(b, e->kids[1]->pos);
        return f_atom(a_cong(a.term, b.term, e->num));
      }
      case SExpr::K::Cmp: {
        Side a = resolve_side(e->kids[0]), b = resolve_side(e->kids[1]);
        bool dataA = a.t != Side::T::IntTerm, dataB = b.t != Side::T::IntTerm;
        if (dataA != dataB)
          fail(ErrKind::SortMismatch, "comparison mixes Data and integer operands", e->pos.line,
               e->pos.col);
        if (dataA) {
          if (e->op != "=")
            fail(ErrKind::SortMismatch, "only equality is defined on Data sorts", e->pos.line,
                 e->pos.col);
          if (a.sortIdx != b.sortIdx)
            fail(ErrKind::SortMismatch, "Data equality across distinct sorts", e->pos.line,
                 e->pos.col);
          if (a.t == Side::T::EnumValue && b.t == Side::T::EnumValue)
            return a.valIdx == b.valIdx ? f_true() : f_false();
          if (a.t == Side::T::EnumValue) std::swap(a, b);
          if (b.t == Side::T::EnumValue)
            return f_atom(a_data_const(a.array, a.primed, a.var, b.valIdx));
          if (a.var != b.var)
            fail(ErrKind::FragmentViolation,
                 "Data-atom relates two distinct Proc-variables '" + a.var + "', '" + b.var + "'",
                 e->pos.line, e->pos.col);
          return f_atom(a_data_arr(a.array, a.primed, b.array, b.primed, a.var));
        }
        if (dataOnly)
          fail(ErrKind::FragmentViolation, "arithmetic atom inside a Data-formula", e->pos.line,
               e->pos.col);
        // normalize > and >= at construction
        if (e->op == "=") return f_atom(a_cmp(CmpOp::Eq, a.term, b.term));
        if (e->op == "<") return f_atom(a_cmp(CmpOp::Lt, a.term, b.term));
        if (e->op == "<=") return f_atom(a_cmp(CmpOp::Le, a.term, b.term));
        if (e->op == ">") return f_atom(a_cmp(CmpOp::Lt, b.term, a.term));
        if (e->op == ">=") return f_atom(a_cmp(CmpOp::Le, b.term, a.term));
        fail(ErrKind::Internal, "unknown comparison op " + e->op);
      }
      default:
        fail(ErrKind::SortMismatch, "expected a formula", e->pos.line, e->pos.col);
    }
  }
};

bool is_data_formula(const Formula& f) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return true;
    case FNode::K::Atom:
      return f->atom.k == Atom::K::DataEqConst || f->atom.k == Atom::K::DataEqArr;
    case FNode::K::Not:
    case FNode::K::And:
    case FNode::K::Or: {
      for (const auto& kid : f->kids)
        if (!is_data_formula(kid)) return false;
      return true;
    }
    default: return false;
  }
}

bool is_arith_literal(const Formula& f) {
  const Formula& core = f->k == FNode::K::Not ? f->kids[0] : f;
  return core->k == FNode::K::Atom &&
         (core->atom.k == Atom::K::Cmp || core->atom.k == Atom::K::Cong);
}

TransitionCase split_case(const Formula& resolved, const Pos& pos, const Vocab* v) {
  std::vector<Formula> conjuncts;
  if (resolved->k == FNode::K::And)
    conjuncts = resolved->kids;
  else
    conjuncts.push_back(resolved);
  TransitionCase tc;
  std::vector<Formula> dataParts;
  for (const auto& c : conjuncts) {
    if (is_data_formula(c)) {
      dataParts.push_back(c);
    } else if (is_arith_literal(c)) {
      tc.arithLits.push_back(c);
    } else {
      fail(ErrKind::FragmentViolation,
           "case conjunct mixes arithmetic and Data atoms: '" + print_formula(c, v) +
               "' (a case is a conjunction of extended arithmetic literals and a Data-formula)",
           pos.line, pos.col);
    }
  }
  tc.dataPart = dataParts.empty() ? f_true() : simplify(f_and(std::move(dataParts)), v);
  return tc;
}

void check_unprimed(const TransitionCase& tc, const char* what, const Vocab* v) {
  auto checkF = [&](const Formula& f) {
    FreeSymbols fs = free_symbols(f);
    for (const auto& s : fs.syms)
      if (s.primed)
        fail(ErrKind::FragmentViolation,
             std::string(what) + " mentions primed symbol '" + print_sym(s) + "'");
    for (const auto& [arr, primed] : fs.arrays)
      if (primed)
        fail(ErrKind::FragmentViolation, std::string(what) + " mentions primed array '" +
                                             v->arrays[arr].name + "''");
  };
  for (const auto& lit : tc.arithLits) checkF(lit);
  checkF(tc.dataPart);
}

} // namespace

SystemSpec validate(const ParsedSpec& parsed) {
  auto vocab = std::make_shared<Vocab>();
  std::set<std::string> names;
  auto declare = [&](const std::string& n, const Pos& pos) {
    if (!names.insert(n).second)
      fail(ErrKind::DuplicateDeclaration, "name '" + n + "' declared twice", pos.line, pos.col);
  };

  for (const auto& pname : parsed.params) declare(pname, Pos{});
  int nCount = 0;
  for (const auto& pname : parsed.params)
    if (pname == "N") ++nCount;
  if (nCount != 1)
    fail(ErrKind::FragmentViolation,
         "the distinguished process-count parameter N must appear exactly once among params");
  vocab->params = parsed.params;

  for (const auto& so : parsed.sorts) {
    declare(so.name, so.pos);
    if (so.values.empty())
      fail(ErrKind::FragmentViolation, "sort '" + so.name + "' has no values", so.pos.line,
           so.pos.col);
    std::set<std::string> vs;
    for (const auto& val : so.values) {
      declare(val, so.pos);
      if (!vs.insert(val).second)
        fail(ErrKind::DuplicateDeclaration, "sort value '" + val + "' repeated", so.pos.line,
             so.pos.col);
    }
    vocab->sorts.push_back({so.name, so.values});
  }

  for (const auto& iv : parsed.intvars) {
    declare(iv.name, iv.pos);
    vocab->intvars.push_back({iv.name, iv.boolSwitch});
  }

  for (const auto& arr : parsed.arrays) {
    declare(arr.name, arr.pos);
    ArrayDecl d;
    d.name = arr.name;
    if (arr.sortName == "int") {
      d.kind = ArrayKind::Arithmetic;
    } else {
      d.kind = ArrayKind::Enumerated;
      d.sortIdx = vocab->sort_index(arr.sortName);
      if (d.sortIdx < 0)
        fail(ErrKind::UnknownSymbol, "unknown sort '" + arr.sortName + "'", arr.pos.line,
             arr.pos.col);
    }
    vocab->arrays.push_back(std::move(d));
  }

  // counters: names first (bodies may not reference counters anyway)
  for (const auto& c : parsed.counters) declare(c.name, c.pos);

  for (const auto& c : parsed.counters) {
    Resolver r;
    r.v = vocab.get();
    r.init_values();
    r.allowPrimed = false;
    r.allowCard = false;
    r.dataOnly = true;
    r.cardVar = c.boundVar;
    Formula body = r.resolve_formula(c.body);
    vocab->counters.push_back({c.name, c.boundVar, body});
  }

  SystemSpec spec;
  spec.vocab = vocab;
  spec.sourceHash = fnv1a(parsed.sourceText);

  auto resolve_case = [&](const ParsedCase& pc, bool primedAllowed) {
    Resolver r;
    r.v = vocab.get();
    r.init_values();
    r.allowPrimed = primedAllowed;
    if (pc.forallVar) {
      if (vocab->name_taken(*pc.forallVar))
        fail(ErrKind::DuplicateDeclaration,
             "bound variable '" + *pc.forallVar + "' shadows a declared name", pc.pos.line,
             pc.pos.col);
      r.procVar = *pc.forallVar;
    } else {
      r.discover = true;
    }
    Formula f = r.resolve_formula(pc.body);
    TransitionCase tc = split_case(f, pc.pos, vocab.get());
    if (!r.procVar.empty()) {
      for (auto& lit : tc.arithLits) lit = rename_proc_var(lit, r.procVar, kCaseVar);
      tc.dataPart = rename_proc_var(tc.dataPart, r.procVar, kCaseVar);
    }
    return tc;
  };

  for (const auto& pc : parsed.invariantCases) {
    TransitionCase tc = resolve_case(pc, false);
    check_unprimed(tc, "invariant", vocab.get());
    spec.invariantPhi.push_back(std::move(tc));
  }

  if (parsed.initCases.empty())
    fail(ErrKind::Syntax, "missing init case");
  if (parsed.initCases.size() > 1)
    fail(ErrKind::MultipleInitCases,
         "init admits exactly one case, found " + std::to_string(parsed.initCases.size()));
  spec.init = resolve_case(parsed.initCases[0], false);
  check_unprimed(spec.init, "init", vocab.get());

  if (parsed.transCases.empty())
    fail(ErrKind::FragmentViolation, "at least one transition case is required");
  for (const auto& pc : parsed.transCases) spec.transCases.push_back(resolve_case(pc, true));

  {
    Resolver r;
    r.v = vocab.get();
    r.init_values();
    r.allowPrimed = false;
    r.allowReads = false;
    r.allowCard = false;
    spec.safetyBad = r.resolve_formula(parsed.unsafe);
  }

  // boolean switches are ints constrained to {0,1} through Phi
  std::vector<Formula> switchAtoms;
  for (const auto& iv : vocab->intvars) {
    if (!iv.boolSwitch) continue;
    Term s = t_sym({SymKind::IntVar, iv.name, false});
    switchAtoms.push_back(f_atom(a_cmp(CmpOp::Le, t_num(0), s)));
    switchAtoms.push_back(f_atom(a_cmp(CmpOp::Le, s, t_num(1))));
  }
  if (!switchAtoms.empty()) {
    if (spec.invariantPhi.empty()) {
      TransitionCase tc;
      tc.dataPart = f_true();
      spec.invariantPhi.push_back(std::move(tc));
    }
    for (auto& tc : spec.invariantPhi)
      for (const auto& at : switchAtoms) tc.arithLits.push_back(at);
  }

  return spec;
}

namespace {

struct DesugarCtx {
  const Vocab* vocab;
  std::vector<DerivedDef>* defs;
  std::map<std::string, Sym> memo; // print(num)|div -> sym
  std::set<std::string> taken;

  Sym fresh_for(const Term& num, const Int& div) {
    std::string key = print_term(num, vocab) + "|" + div.str();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int i = 0;
    std::string name;
    do {
      name = "t" + std::to_string(i++);
    } while (vocab->name_taken(name) || taken.count(name));
    taken.insert(name);
    Sym sym{SymKind::Derived, name, false};
    memo.emplace(key, sym);
    DerivedDef d;
    d.sym = sym;
    d.num = num;
    d.div = div;
    d.perProcess = !free_symbols(num).arrays.empty();
    defs->push_back(std::move(d));
    return sym;
  }
};

Term desugar_term(const Term& t, DesugarCtx& ctx, std::set<std::string>& used) {
  switch (t->k) {
    case TermNode::K::Num:
    case TermNode::K::SymRef:
    case TermNode::K::Read: return t;
    case TermNode::K::Card: return t; // data bodies carry no arithmetic terms
    case TermNode::K::Add: return t_add(desugar_term(t->a, ctx, used), desugar_term(t->b, ctx, used));
    case TermNode::K::Sub: return t_sub(desugar_term(t->a, ctx, used), desugar_term(t->b, ctx, used));
    case TermNode::K::Mul: return t_mul(t->num, desugar_term(t->a, ctx, used));
    case TermNode::K::FloorDiv: {
      if (t->num <= 0)
        fail(ErrKind::NonConstantDivisor,
             "floor division requires a positive numeral divisor, got " + t->num.str());
      Term num = desugar_term(t->a, ctx, used);
      Sym sym = ctx.fresh_for(num, t->num);
      used.insert(sym.name);
      return t_sym(sym);
    }
  }
  return t;
}

Formula desugar_lit(const Formula& f, DesugarCtx& ctx, std::set<std::string>& used) {
  if (f->k == FNode::K::Not) return f_not(desugar_lit(f->kids[0], ctx, used));
  if (f->k != FNode::K::Atom) return f;
  Atom a = f->atom;
  if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
    a.lhs = desugar_term(a.lhs, ctx, used);
    a.rhs = desugar_term(a.rhs, ctx, used);
  }
  return f_atom(std::move(a));
}

TransitionCase desugar_case(const TransitionCase& tc, DesugarCtx& ctx) {
  TransitionCase out;
  out.dataPart = tc.dataPart;
  std::set<std::string> used;
  for (const auto& lit : tc.arithLits) out.arithLits.push_back(desugar_lit(lit, ctx, used));
  // side constraints d*t <= u  and  u < d*t + d, conjoined to the case
  for (const auto& d : *ctx.defs) {
    if (!used.count(d.sym.name)) continue;
    Term dt = t_mul(d.div, t_sym(d.sym));
    out.arithLits.push_back(f_atom(a_cmp(CmpOp::Le, dt, d.num)));
    out.arithLits.push_back(f_atom(a_cmp(CmpOp::Lt, d.num, t_add(dt, t_num(d.div)))));
  }
  return out;
}

} // namespace

SystemSpec desugar_floor_div(const SystemSpec& spec) {
  SystemSpec out = spec;
  out.derived.clear();
  out.invariantPhi.clear();
  out.transCases.clear();
  DesugarCtx ctx{spec.vocab.get(), &out.derived, {}, {}};
  for (const auto& d : spec.derived) ctx.taken.insert(d.sym.name); // idempotent reruns
  for (const auto& tc : spec.invariantPhi) out.invariantPhi.push_back(desugar_case(tc, ctx));
  out.init = desugar_case(spec.init, ctx);
  for (const auto& tc : spec.transCases) out.transCases.push_back(desugar_case(tc, ctx));
  return out;
}

Formula resolve_arith_formula(const SExprP& e, const VocabPtr& vocab) {
  Resolver r;
  r.v = vocab.get();
  r.init_values();
  r.allowPrimed = false;
  r.allowReads = false;
  r.allowCard = false;
  return r.resolve_formula(e);
}

Formula resolve_abstract_formula(const SExprP& e, const VocabPtr& vocab,
                                 const std::set<std::string>& derivedNames, bool allowPrimed) {
  Resolver r;
  r.v = vocab.get();
  r.init_values();
  r.allowPrimed = allowPrimed;
  r.allowReads = false;
  r.allowCard = false;
  r.derivedNames = &derivedNames;
  return r.resolve_formula(e);
}

} // namespace ctrabs::front
