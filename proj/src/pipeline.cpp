#include "ctrabs/pipeline.hpp"

#include "ctrabs/parser.hpp"
#include "ctrabs/print.hpp"
#include "ctrabs/simplify.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace ctrabs::pipe {

using namespace ctrabs::logic;
using qe::ConSet;
using qe::ConSets;
using qe::LinCon;

// ---------------------------------------------------------------- cells

CellSpace build_cells(const SystemSpec& spec, bool transScope, size_t cellBudget) {
  CellSpace cs;
  cs.transScope = transScope;
  std::vector<std::pair<std::string, std::pair<int, bool>>> named;
  for (size_t i = 0; i < spec.vocab->arrays.size(); ++i) {
    if (spec.vocab->arrays[i].kind != ArrayKind::Enumerated) continue;
    named.push_back({spec.vocab->arrays[i].name, {(int)i, false}});
    if (transScope) named.push_back({spec.vocab->arrays[i].name, {(int)i, true}});
  }
  std::sort(named.begin(), named.end());
  size_t count = 1;
  for (const auto& [name, ap] : named) {
    cs.scopeArrays.push_back(ap);
    size_t m = spec.vocab->sorts[spec.vocab->arrays[ap.first].sortIdx].values.size();
    count *= m;
    if (count > cellBudget)
      fail(ErrKind::CellBudgetExceeded,
           "cell space needs " + std::to_string(count) + "+ counters, budget is " +
               std::to_string(cellBudget));
  }
  cs.cells.resize(count);
  for (size_t idx = 0; idx < count; ++idx) {
    Cell& cell = cs.cells[idx];
    cell.vals.resize(cs.scopeArrays.size());
    size_t rest = idx;
    for (size_t a = cs.scopeArrays.size(); a-- > 0;) {
      size_t m =
          spec.vocab->sorts[spec.vocab->arrays[cs.scopeArrays[a].first].sortIdx].values.size();
      cell.vals[a] = (int)(rest % m);
      rest /= m;
    }
    cell.sym = Sym{SymKind::Cell, "c" + std::to_string(idx), false};
  }
  return cs;
}

bool cell_satisfies(const Formula& f, const CellSpace& cs, const Cell& cell) {
  auto lookup = [&](int array, bool primed) -> int {
    for (size_t a = 0; a < cs.scopeArrays.size(); ++a)
      if (cs.scopeArrays[a].first == array && cs.scopeArrays[a].second == primed)
        return cell.vals[a];
    fail(ErrKind::Internal, "cell_satisfies: array not in scope");
  };
  switch (f->k) {
    case FNode::K::True: return true;
    case FNode::K::False: return false;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      if (a.k == Atom::K::DataEqConst) return lookup(a.arrA, a.primedA) == a.valIdx;
      if (a.k == Atom::K::DataEqArr)
        return lookup(a.arrA, a.primedA) == lookup(a.arrB, a.primedB);
      fail(ErrKind::Internal, "cell_satisfies: arithmetic atom in Data-formula");
    }
    case FNode::K::Not: return !cell_satisfies(f->kids[0], cs, cell);
    case FNode::K::And:
      for (const auto& kid : f->kids)
        if (!cell_satisfies(kid, cs, cell)) return false;
      return true;
    case FNode::K::Or:
      for (const auto& kid : f->kids)
        if (cell_satisfies(kid, cs, cell)) return true;
      return false;
    default: fail(ErrKind::Internal, "cell_satisfies: quantifier in Data-formula");
  }
}

std::vector<LinCon> counters_as_cell_sums(const std::vector<CounterInfo>& counters,
                                          const CellSpace& cs) {
  std::vector<LinCon> out;
  for (const auto& ctr : counters) {
    LinCon eq;
    eq.k = LinCon::K::Eq;
    eq.lin.c.emplace(ctr.sym, 1);
    for (const auto& cell : cs.cells)
      if (cell_satisfies(ctr.body, cs, cell)) eq.lin.add_coeff(cell.sym, -1);
    out.push_back(std::move(eq));
  }
  return out;
}

std::vector<LinCon> encode_forall_data(const Formula& theta, const CellSpace& cs) {
  std::vector<LinCon> out;
  Sym N{SymKind::Param, "N", false};
  LinCon eps;
  eps.k = LinCon::K::Eq;
  eps.lin.c.emplace(N, 1);
  for (const auto& cell : cs.cells)
    if (cell_satisfies(theta, cs, cell)) eps.lin.add_coeff(cell.sym, -1);
  out.push_back(std::move(eps));
  LinCon partition;
  partition.k = LinCon::K::Eq;
  partition.lin.c.emplace(N, 1);
  for (const auto& cell : cs.cells) partition.lin.add_coeff(cell.sym, -1);
  out.push_back(std::move(partition));
  for (const auto& cell : cs.cells) {
    LinCon nn;
    nn.k = LinCon::K::Le;
    nn.lin.c.emplace(cell.sym, -1);
    out.push_back(std::move(nn));
  }
  return out;
}

// ------------------------------------------------------- counter matching

namespace {

Formula normalize_order(const Formula& f) {
  switch (f->k) {
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      for (const auto& kid : f->kids) kids.push_back(normalize_order(kid));
      std::sort(kids.begin(), kids.end(), [](const Formula& a, const Formula& b) {
        return print_formula(a, nullptr) < print_formula(b, nullptr);
      });
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FNode::K::Not: return f_not(normalize_order(f->kids[0]));
    default: return f;
  }
}

std::string card_match_key(const std::string& boundVar, const Formula& body, const Vocab* v) {
  Formula renamed = rename_proc_var(body, boundVar, "$k");
  return print_formula(normalize_order(simplify(renamed, v)), nullptr);
}

struct CounterMatcher {
  const SystemSpec* spec;
  AutoCounters* autos;
  std::map<std::string, Sym> byKey;
  std::set<std::string> takenNames;

  explicit CounterMatcher(const SystemSpec& s, AutoCounters& a) : spec(&s), autos(&a) {
    const Vocab* v = s.vocab.get();
    for (const auto& ctr : v->counters) {
      byKey[card_match_key(ctr.boundVar, ctr.body, v)] = Sym{SymKind::Counter, ctr.name, false};
      byKey[card_match_key(ctr.boundVar, prime_state(ctr.body), v)] =
          Sym{SymKind::Counter, ctr.name, true};
    }
    for (const auto& d : s.derived) takenNames.insert(d.sym.name);
    for (const auto& [name, body] : a.reported) takenNames.insert(name);
  }

  Sym match(const Term& card) {
    const Vocab* v = spec->vocab.get();
    std::string key = card_match_key(card->var, card->body, v);
    auto it = byKey.find(key);
    if (it != byKey.end()) return it->second;
    int i = 0;
    std::string name;
    do {
      name = "q" + std::to_string(i++);
    } while (v->name_taken(name) || takenNames.count(name));
    takenNames.insert(name);
    Sym sym{SymKind::AutoCounter, name, false};
    byKey[key] = sym;
    Formula body = rename_proc_var(card->body, card->var, "$k");
    autos->reported.push_back({name, print_term(t_card("$k", body), v)});
    autos->defs.push_back({sym, body});
    return sym;
  }
};

Term replace_counters_rec(const Term& t, CounterMatcher& m) {
  switch (t->k) {
    case TermNode::K::Num:
    case TermNode::K::SymRef:
    case TermNode::K::Read: return t;
    case TermNode::K::Card: return t_sym(m.match(t));
    case TermNode::K::Add: return t_add(replace_counters_rec(t->a, m), replace_counters_rec(t->b, m));
    case TermNode::K::Sub: return t_sub(replace_counters_rec(t->a, m), replace_counters_rec(t->b, m));
    case TermNode::K::Mul: return t_mul(t->num, replace_counters_rec(t->a, m));
    case TermNode::K::FloorDiv: return t_floordiv(replace_counters_rec(t->a, m), t->num);
  }
  return t;
}

Formula replace_counters_rec(const Formula& f, CounterMatcher& m) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      Atom a = f->atom;
      if (a.k == Atom::K::Cmp || a.k == Atom::K::Cong) {
        a.lhs = replace_counters_rec(a.lhs, m);
        a.rhs = replace_counters_rec(a.rhs, m);
      }
      return f_atom(std::move(a));
    }
    case FNode::K::Not: return f_not(replace_counters_rec(f->kids[0], m));
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      for (const auto& kid : f->kids) kids.push_back(replace_counters_rec(kid, m));
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case FNode::K::ForallProc: return f_forall(f->var, replace_counters_rec(f->kids[0], m));
    case FNode::K::ExistsInt: return f_exists_int(f->var, replace_counters_rec(f->kids[0], m));
  }
  return f;
}

} // namespace

Formula replace_counters(const Formula& f, const SystemSpec& spec, AutoCounters& autoOut) {
  CounterMatcher m(spec, autoOut);
  return replace_counters_rec(f, m);
}
Term replace_counters(const Term& t, const SystemSpec& spec, AutoCounters& autoOut) {
  CounterMatcher m(spec, autoOut);
  return replace_counters_rec(t, m);
}

// ------------------------------------------------- literals -> constraints

namespace {

// one literal -> constraint alternatives (negated equality splits)
std::vector<std::vector<LinCon>> literal_to_lincons(const Formula& lit, CardAbs* cards) {
  bool neg = lit->k == FNode::K::Not;
  const Formula& core = neg ? lit->kids[0] : lit;
  if (core->k != FNode::K::Atom)
    fail(ErrKind::Internal, "arithmetic literal expected, got " + print_formula(lit, nullptr));
  const Atom& a = core->atom;
  auto l = linearize(a.lhs, cards), r = linearize(a.rhs, cards);
  if (!l || !r)
    fail(ErrKind::Internal,
         "non-linear arithmetic atom (undesugared div or residual read): " +
             print_atom(a, nullptr));
  Linear diff = *l;
  diff -= *r;
  auto one = [&](LinCon::K k, Linear lin, Int mod = 0) {
    LinCon c;
    c.k = k;
    c.lin = std::move(lin);
    c.mod = std::move(mod);
    return std::vector<std::vector<LinCon>>{{c}};
  };
  if (a.k == Atom::K::Cong)
    return one(neg ? LinCon::K::NCong : LinCon::K::Cong, diff, a.mod);
  switch (a.op) {
    case CmpOp::Eq:
      if (!neg) return one(LinCon::K::Eq, diff);
      else {
        LinCon lt;
        lt.k = LinCon::K::Lt;
        lt.lin = diff;
        LinCon gt;
        gt.k = LinCon::K::Lt;
        gt.lin = diff.negated();
        return {{lt}, {gt}};
      }
    case CmpOp::Lt:
      if (!neg) return one(LinCon::K::Lt, diff);
      return one(LinCon::K::Le, diff.negated());
    case CmpOp::Le:
      if (!neg) return one(LinCon::K::Le, diff);
      return one(LinCon::K::Lt, diff.negated());
  }
  fail(ErrKind::Internal, "literal_to_lincons fell through");
}

// -1 keep, 0 constraint false, 1 constraint trivially true in the pipeline
// context (counters and cardinalities are nonnegative by definition)
int pipeline_decide(LinCon& c) {
  int dec = c.normalize();
  if (dec >= 0) return dec;
  if (c.k == LinCon::K::Le) {
    bool allCount = true, allNeg = true, allPos = true;
    for (const auto& [s, v] : c.lin.c) {
      if (s.kind != SymKind::Counter && s.kind != SymKind::AutoCounter &&
          s.kind != SymKind::Opaque && s.kind != SymKind::Cell)
        allCount = false;
      if (v > 0) allNeg = false;
      if (v < 0) allPos = false;
    }
    if (allCount && !c.lin.c.empty()) {
      if (allNeg && c.lin.k <= 0) return 1;
      if (allPos && c.lin.k > 0) return 0;
    }
  }
  return -1;
}

// conjunction of literals -> DNF of constraint sets, pipeline-simplified
std::vector<std::vector<LinCon>> lits_to_variants(const std::vector<Formula>& lits,
                                                  CardAbs* cards) {
  std::vector<std::vector<LinCon>> variants{{}};
  for (const auto& lit : lits) {
    auto alts = literal_to_lincons(lit, cards);
    std::vector<std::vector<LinCon>> next;
    for (const auto& variant : variants) {
      for (const auto& alt : alts) {
        std::vector<LinCon> merged = variant;
        bool dead = false;
        for (LinCon c : alt) {
          int dec = pipeline_decide(c);
          if (dec == 0) {
            dead = true;
            break;
          }
          if (dec == 1) continue;
          merged.push_back(std::move(c));
        }
        if (!dead) next.push_back(std::move(merged));
      }
    }
    variants = std::move(next);
    if (variants.empty()) break;
  }
  return variants;
}

Formula lincon_to_formula(const LinCon& c, const CardAbs* cards) {
  auto side_term = [&](const Linear& lin, bool positive) -> Term {
    Term acc;
    auto add = [&](Term t) { acc = acc ? t_add(acc, t) : t; };
    for (const auto& [s, v] : lin.c) {
      if ((v > 0) != positive) continue;
      Int av = v > 0 ? v : Int(-v);
      Term base = s.kind == SymKind::Opaque && cards ? cards->term_of(s) : t_sym(s);
      add(av == 1 ? base : t_mul(av, base));
    }
    if (positive && lin.k > 0) add(t_num(lin.k));
    if (!positive && lin.k < 0) add(t_num(-lin.k));
    return acc ? acc : t_num(0);
  };
  Term lhs = side_term(c.lin, true), rhs = side_term(c.lin, false);
  switch (c.k) {
    case LinCon::K::Eq: return f_atom(a_cmp(CmpOp::Eq, lhs, rhs));
    case LinCon::K::Le: return f_atom(a_cmp(CmpOp::Le, lhs, rhs));
    case LinCon::K::Lt: return f_atom(a_cmp(CmpOp::Lt, lhs, rhs));
    case LinCon::K::Cong: return f_atom(a_cong(lhs, rhs, c.mod));
    case LinCon::K::NCong: return f_not(f_atom(a_cong(lhs, rhs, c.mod)));
  }
  fail(ErrKind::Internal, "lincon_to_formula fell through");
}

} // namespace

std::vector<TransitionCase> reverse_skolemize_case(const TransitionCase& tc,
                                                   const SystemSpec& spec, qe::ElimStats* stats) {
  // collect arithmetic-array reads
  std::set<std::pair<int, bool>> reads;
  for (const auto& lit : tc.arithLits)
    for (const auto& ar : free_symbols(lit).arrays)
      if (spec.vocab->arrays[ar.first].kind == ArrayKind::Arithmetic) reads.insert(ar);
  if (reads.empty()) return {tc};

  Substitution sub;
  int i = 0;
  for (const auto& ar : reads)
    sub.reads[ar] = Sym{SymKind::Skolem, "u" + std::to_string(i++), false};
  std::vector<Formula> lits;
  lits.reserve(tc.arithLits.size());
  for (const auto& lit : tc.arithLits) lits.push_back(substitute(lit, sub));

  CardAbs cards;
  auto variants = lits_to_variants(lits, &cards);
  std::vector<TransitionCase> out;
  for (const auto& variant : variants) {
    ConSets in;
    in.sets.push_back(ConSet{variant});
    auto res = qe::eliminate_all(
        std::move(in), [](const Sym& s) { return s.kind == SymKind::Skolem; },
        qe::Policy::Exact, 5000, stats);
    for (const auto& cset : res.sets.sets) {
      TransitionCase ntc;
      ntc.dataPart = tc.dataPart;
      for (const auto& con : cset.cons) {
        LinCon copy = con;
        int dec = pipeline_decide(copy);
        if (dec == 1) continue;
        if (dec == 0) {
          ntc.arithLits.clear();
          ntc.dataPart = nullptr; // marker: dead branch
          break;
        }
        ntc.arithLits.push_back(lincon_to_formula(copy, &cards));
      }
      if (ntc.dataPart) out.push_back(std::move(ntc));
    }
  }
  return out;
}

// ------------------------------------------------------------- projection

namespace {

struct PreparedCase {
  std::vector<std::pair<size_t, bool>> lits; // (alphabet idx, positive)
  Formula data;
  int srcCase;
};

struct Alphabet {
  std::vector<LinCon> atoms; // positive orientation (NCong stored as Cong)
  std::map<std::string, size_t> index;

  std::pair<size_t, bool> intern(const LinCon& c) {
    LinCon pos = c;
    bool positive = true;
    if (pos.k == LinCon::K::NCong) {
      pos.k = LinCon::K::Cong;
      positive = false;
    }
    std::string key = print_lincon(pos);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, atoms.size()).first;
      atoms.push_back(pos);
    }
    return {it->second, positive};
  }

  LinCon extract(size_t idx, bool positive) const {
    LinCon c = atoms[idx];
    if (!positive) {
      if (c.k == LinCon::K::Cong) {
        c.k = LinCon::K::NCong;
      } else {
        fail(ErrKind::Internal, "negative literal over a non-congruence atom");
      }
    }
    return c;
  }
};

struct ProjectInput {
  std::vector<PreparedCase> cases;
  Alphabet alphabet;
};

// runs skolemization, counter replacement and constraint conversion on every
// case, building the deduplicated ground-atom alphabet
ProjectInput prepare_cases(const std::vector<TransitionCase>& cases, const SystemSpec& spec,
                           CounterMatcher& matcher, const Budgets& budgets, PipelineStats& stats) {
  ProjectInput in;
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    for (const auto& sk : reverse_skolemize_case(cases[ci], spec, &stats.elim)) {
      std::vector<Formula> lits;
      lits.reserve(sk.arithLits.size());
      for (const auto& lit : sk.arithLits) lits.push_back(replace_counters_rec(lit, matcher));
      Formula data = simplify(sk.dataPart, spec.vocab.get());
      auto variants = lits_to_variants(lits, nullptr);
      for (const auto& variant : variants) {
        PreparedCase pc;
        pc.srcCase = (int)ci;
        pc.data = data;
        bool dead = false;
        std::set<std::pair<size_t, bool>> seen;
        for (const auto& con : variant) {
          auto lit = in.alphabet.intern(con);
          if (seen.count({lit.first, !lit.second})) {
            dead = true; // contradictory polarities within one case
            break;
          }
          seen.insert(lit);
        }
        if (dead) continue;
        pc.lits.assign(seen.begin(), seen.end());
        in.cases.push_back(std::move(pc));
      }
    }
  }
  stats.cases = std::max(stats.cases, in.cases.size());
  stats.atoms = std::max(stats.atoms, in.alphabet.atoms.size());
  if (in.alphabet.atoms.size() > budgets.atoms)
    fail(ErrKind::AtomBudgetExceeded,
         "ground-atom alphabet has " + std::to_string(in.alphabet.atoms.size()) +
             " atoms, budget is " + std::to_string(budgets.atoms));
  return in;
}

// Enumerates the Boolean assignments over the alphabet and collects the
// distinct survivor sets. Assignment literals outside the surviving cases'
// atoms are absorbed (both polarities yield the same surviving set), so each
// survivor set stands for the whole family of assignments selecting it.
std::vector<std::vector<size_t>> survivor_sets(const ProjectInput& in, PipelineStats& stats) {
  size_t A = in.alphabet.atoms.size();
  size_t C = in.cases.size();
  if (A > 30) fail(ErrKind::AtomBudgetExceeded, "alphabet too large for assignment enumeration");
  constexpr size_t kWords = 4;
  if (C > 64 * kWords)
    fail(ErrKind::AtomBudgetExceeded, "too many case variants for assignment enumeration");
  std::vector<uint64_t> posMask(C, 0), negMask(C, 0);
  for (size_t c = 0; c < C; ++c) {
    for (const auto& [idx, positive] : in.cases[c].lits)
      (positive ? posMask[c] : negMask[c]) |= (1ull << idx);
  }
  uint64_t total = 1ull << A;
  stats.assignments += total;
  using Key = std::array<uint64_t, kWords>;
  std::set<Key> sets;
  for (uint64_t alpha = 0; alpha < total; ++alpha) {
    Key key{};
    bool any = false;
    for (size_t c = 0; c < C; ++c) {
      if ((alpha & posMask[c]) == posMask[c] && (alpha & negMask[c]) == 0) {
        key[c / 64] |= (1ull << (c % 64));
        any = true;
      }
    }
    if (any) sets.insert(key);
  }
  stats.survivorSets += sets.size();
  std::vector<std::vector<size_t>> out;
  out.reserve(sets.size());
  for (const auto& key : sets) {
    std::vector<size_t> survivors;
    for (size_t c = 0; c < C; ++c)
      if (key[c / 64] & (1ull << (c % 64))) survivors.push_back(c);
    out.push_back(std::move(survivors));
  }
  return out;
}

std::vector<CounterInfo> scope_counters(const SystemSpec& spec, bool transScope) {
  std::vector<CounterInfo> out;
  for (const auto& ctr : spec.vocab->counters) {
    Formula body = rename_proc_var(ctr.body, ctr.boundVar, "$k");
    out.push_back({Sym{SymKind::Counter, ctr.name, false}, body});
    if (transScope) out.push_back({Sym{SymKind::Counter, ctr.name, true}, prime_state(body)});
  }
  return out;
}

std::vector<Disjunct> project_cases(const std::vector<TransitionCase>& cases,
                                    const SystemSpec& spec, bool transScope, int phiIdx,
                                    CounterMatcher& matcher, const AutoCounters& autos,
                                    const Budgets& budgets, bool relax, bool& exact,
                                    PipelineStats& stats) {
  ProjectInput in = prepare_cases(cases, spec, matcher, budgets, stats);
  auto sets = survivor_sets(in, stats);

  CellSpace cs = build_cells(spec, transScope, budgets.cells);
  stats.cells = std::max(stats.cells, cs.cells.size());
  std::vector<CounterInfo> declared = scope_counters(spec, transScope);
  std::vector<LinCon> declaredEqs = counters_as_cell_sums(declared, cs);

  const bool debug = std::getenv("CTRABS_DEBUG") != nullptr;
  std::vector<Disjunct> out;
  for (const auto& S : sets) {
    // beta: union of the surviving cases' literals (consistent by construction)
    std::set<std::pair<size_t, bool>> beta;
    std::vector<Formula> datas;
    std::set<std::string> dataSeen;
    std::set<int> srcCases;
    for (size_t c : S) {
      for (const auto& lit : in.cases[c].lits) beta.insert(lit);
      srcCases.insert(in.cases[c].srcCase);
      std::string key = print_formula(in.cases[c].data, nullptr);
      if (dataSeen.insert(key).second) datas.push_back(in.cases[c].data);
    }
    Formula theta = simplify(f_or(std::move(datas)), spec.vocab.get());

    ConSet constraints;
    std::set<Sym> betaSyms;
    for (const auto& [idx, positive] : beta) {
      LinCon c = in.alphabet.extract(idx, positive);
      for (const auto& [s, v] : c.lin.c) betaSyms.insert(s);
      constraints.cons.push_back(std::move(c));
    }
    for (const auto& eq : declaredEqs) constraints.cons.push_back(eq);
    for (const auto& ac : autos.defs) {
      if (!betaSyms.count(ac.sym)) continue;
      std::vector<CounterInfo> one{ac};
      for (auto& eq : counters_as_cell_sums(one, cs)) constraints.cons.push_back(std::move(eq));
    }
    for (auto& c : encode_forall_data(theta, cs)) constraints.cons.push_back(std::move(c));

    if (debug) {
      std::string cases;
      for (size_t c : S) cases += std::to_string(c) + ",";
      fprintf(stderr, "[pipe] survivor set {%s} cons=%zu theta=%s\n", cases.c_str(),
              constraints.cons.size(), print_formula(theta, spec.vocab.get()).c_str());
    }
    ConSets start;
    start.sets.push_back(std::move(constraints));
    auto res = qe::eliminate_all(
        std::move(start),
        [](const Sym& s) {
          return s.kind == SymKind::Cell || s.kind == SymKind::AutoCounter ||
                 s.kind == SymKind::Skolem || s.kind == SymKind::Opaque ||
                 s.kind == SymKind::Derived;
        },
        relax ? qe::Policy::RelaxOnBudget : qe::Policy::Exact, budgets.qeRelax, &stats.elim,
        [](const Sym& s) { return s.kind == SymKind::Derived; });
    if (!res.exact) exact = false;

    Provenance prov;
    prov.phiDisjunct = phiIdx;
    prov.caseIdxs.assign(srcCases.begin(), srcCases.end());
    for (const auto& [idx, positive] : beta)
      prov.alpha.push_back(print_lincon(in.alphabet.extract(idx, positive)));

    for (auto& cset : res.sets.sets) {
      stats.disjunctsBeforePrune++;
      if (qe::interval_unsat(cset) || qe::fm_ground_unsat(cset)) {
        stats.prunedUnsat++;
        continue;
      }
      sort_conset(cset);
      out.push_back({std::move(cset), prov});
    }
  }
  std::sort(out.begin(), out.end(), [](const Disjunct& a, const Disjunct& b) {
    if (a.prov.phiDisjunct != b.prov.phiDisjunct) return a.prov.phiDisjunct < b.prov.phiDisjunct;
    return a.cons.cons < b.cons.cons;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Disjunct& a, const Disjunct& b) {
                          return a.cons.cons == b.cons.cons &&
                                 a.prov.phiDisjunct == b.prov.phiDisjunct;
                        }),
            out.end());
  stats.disjuncts += out.size();
  return out;
}

TransitionCase conjoin_cases(const TransitionCase& phi, const TransitionCase& tau) {
  TransitionCase out;
  out.arithLits = phi.arithLits;
  for (const auto& lit : tau.arithLits) out.arithLits.push_back(lit);
  if (phi.dataPart->k == FNode::K::True)
    out.dataPart = tau.dataPart;
  else if (tau.dataPart->k == FNode::K::True)
    out.dataPart = phi.dataPart;
  else
    out.dataPart = f_and({phi.dataPart, tau.dataPart});
  return out;
}

} // namespace

CounterSystem build_counter_system(const SystemSpec& rawSpec, const Budgets& budgets, bool relax) {
  SystemSpec spec = front::desugar_floor_div(rawSpec);
  CounterSystem cs;
  cs.vocab = spec.vocab;
  cs.specHash = spec.sourceHash;
  cs.locals = spec.derived;
  for (const auto& p : spec.vocab->params) cs.params.push_back({SymKind::Param, p, false});
  for (const auto& iv : spec.vocab->intvars) cs.intvars.push_back({SymKind::IntVar, iv.name, false});
  for (const auto& c : spec.vocab->counters) cs.counters.push_back({SymKind::Counter, c.name, false});

  AutoCounters autos;
  CounterMatcher matcher(spec, autos);

  if (spec.invariantPhi.empty()) {
    cs.phi0.push_back({});
  } else {
    for (size_t j = 0; j < spec.invariantPhi.size(); ++j) {
      auto ds = project_cases({spec.invariantPhi[j]}, spec, false, (int)j, matcher, autos, budgets,
                              relax, cs.exact, cs.stats);
      for (auto& d : ds) cs.phi0.push_back(std::move(d));
    }
  }

  cs.iota0 = project_cases({spec.init}, spec, false, -1, matcher, autos, budgets, relax, cs.exact,
                           cs.stats);

  std::vector<TransitionCase> phiCases = spec.invariantPhi;
  if (phiCases.empty()) {
    TransitionCase top;
    top.dataPart = f_true();
    phiCases.push_back(std::move(top));
  }
  for (size_t j = 0; j < phiCases.size(); ++j) {
    std::vector<TransitionCase> combined;
    combined.reserve(spec.transCases.size());
    for (const auto& tc : spec.transCases) combined.push_back(conjoin_cases(phiCases[j], tc));
    auto ds = project_cases(combined, spec, true, (int)j, matcher, autos, budgets, relax, cs.exact,
                            cs.stats);
    for (auto& d : ds) cs.tau0.push_back(std::move(d));
  }

  cs.autoCounters = autos.reported;
  return cs;
}

// ------------------------------------------------------------------ JSON

nlohmann::ordered_json counter_system_json(const CounterSystem& cs) {
  nlohmann::ordered_json j;
  const Vocab* v = cs.vocab.get();
  nlohmann::ordered_json counters = nlohmann::ordered_json::object();
  for (const auto& ctr : v->counters)
    counters[ctr.name] = print_term(t_card(ctr.boundVar, ctr.body), v);
  j["counters"] = std::move(counters);
  j["intvars"] = nlohmann::ordered_json::array();
  for (const auto& s : cs.intvars) j["intvars"].push_back(s.name);
  j["params"] = nlohmann::ordered_json::array();
  for (const auto& s : cs.params) j["params"].push_back(s.name);
  auto dumpDisjuncts = [&](const std::vector<Disjunct>& ds) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : ds) {
      nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
      for (const auto& con : d.cons.cons) atoms.push_back(print_lincon(con));
      arr.push_back(std::move(atoms));
    }
    return arr;
  };
  j["phi0"] = dumpDisjuncts(cs.phi0);
  j["iota0"] = dumpDisjuncts(cs.iota0);
  j["tau0"] = dumpDisjuncts(cs.tau0);
  j["exact"] = cs.exact;
  nlohmann::ordered_json prov;
  nlohmann::ordered_json locals = nlohmann::ordered_json::object();
  for (const auto& d : cs.locals) {
    nlohmann::ordered_json def;
    def["num"] = print_term(d.num, v);
    def["div"] = d.div.str();
    locals[d.sym.name] = std::move(def);
  }
  prov["locals"] = std::move(locals);
  nlohmann::ordered_json autosj = nlohmann::ordered_json::object();
  for (const auto& [name, body] : cs.autoCounters) autosj[name] = body;
  prov["auto_counters"] = std::move(autosj);
  auto provDisjuncts = [&](const std::vector<Disjunct>& ds) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : ds) {
      nlohmann::ordered_json p;
      p["phi_disjunct"] = d.prov.phiDisjunct;
      p["cases"] = d.prov.caseIdxs;
      p["alpha"] = d.prov.alpha;
      arr.push_back(std::move(p));
    }
    return arr;
  };
  prov["phi0"] = provDisjuncts(cs.phi0);
  prov["iota0"] = provDisjuncts(cs.iota0);
  prov["tau0"] = provDisjuncts(cs.tau0);
  nlohmann::ordered_json st;
  st["cases"] = cs.stats.cases;
  st["atoms"] = cs.stats.atoms;
  st["assignments"] = cs.stats.assignments;
  st["survivor_sets"] = cs.stats.survivorSets;
  st["cells"] = cs.stats.cells;
  st["disjuncts_before_prune"] = cs.stats.disjunctsBeforePrune;
  st["pruned_unsat"] = cs.stats.prunedUnsat;
  st["substitutions"] = cs.stats.elim.substitutions;
  st["coopers"] = cs.stats.elim.coopers;
  st["fm_fallbacks"] = cs.stats.elim.fms;
  st["zero_forced"] = cs.stats.elim.zeroForced;
  prov["stats"] = std::move(st);
  prov["spec_hash"] = cs.specHash;
  j["provenance"] = std::move(prov);
  return j;
}

std::string counter_system_dump(const CounterSystem& cs) {
  return counter_system_json(cs).dump(2) + "\n";
}

CounterSystem counter_system_load(const std::string& jsonText, const SystemSpec& rawSpec) {
  SystemSpec spec = front::desugar_floor_div(rawSpec);
  nlohmann::json j = nlohmann::json::parse(jsonText);
  CounterSystem cs;
  cs.vocab = spec.vocab;
  cs.specHash = spec.sourceHash;
  cs.locals = spec.derived;
  for (const auto& p : spec.vocab->params) cs.params.push_back({SymKind::Param, p, false});
  for (const auto& iv : spec.vocab->intvars) cs.intvars.push_back({SymKind::IntVar, iv.name, false});
  for (const auto& c : spec.vocab->counters) cs.counters.push_back({SymKind::Counter, c.name, false});
  cs.exact = j.value("exact", true);
  std::set<std::string> derivedNames;
  for (const auto& d : cs.locals) derivedNames.insert(d.sym.name);
  if (j.contains("provenance") && j["provenance"].contains("locals")) {
    for (auto it = j["provenance"]["locals"].begin(); it != j["provenance"]["locals"].end(); ++it)
      derivedNames.insert(it.key());
  }
  auto loadDisjuncts = [&](const nlohmann::json& arr) {
    std::vector<Disjunct> out;
    for (const auto& datoms : arr) {
      Disjunct d;
      for (const auto& atomText : datoms) {
        Formula f = front::resolve_abstract_formula(
            front::parse_expression(atomText.get<std::string>()), spec.vocab, derivedNames, true);
        auto lincons = literal_to_lincons(f, nullptr);
        if (lincons.size() != 1)
          fail(ErrKind::Config, "abstraction atom is not a single constraint: " +
                                    atomText.get<std::string>());
        for (auto& c : lincons[0]) {
          c.normalize();
          d.cons.cons.push_back(std::move(c));
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  };
  cs.phi0 = loadDisjuncts(j.at("phi0"));
  cs.iota0 = loadDisjuncts(j.at("iota0"));
  cs.tau0 = loadDisjuncts(j.at("tau0"));
  return cs;
}

} // namespace ctrabs::pipe
