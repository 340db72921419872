#include "ctrabs/oracle.hpp"

#include "ctrabs/print.hpp"
#include "ctrabs/simplify.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ctrabs::oracle {

using namespace ctrabs::logic;
using front::TransitionCase;

// --------------------------------------------------------------- reports

std::string AbstractState::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
  if (!iv.empty()) {
    os << " |";
    for (size_t i = 0; i < iv.size(); ++i) os << " " << iv[i];
  }
  os << ")";
  return os.str();
}

std::string SimulationReport::to_json() const {
  nlohmann::ordered_json j;
  j["checkedN"] = checkedN;
  j["counts"] = {{"states", concreteStateCount}, {"transitions", concreteTransitionCount}};
  j["simulationHolds"] = simulationHolds;
  j["strongestHolds"] = strongestHolds;
  j["skippedTuples"] = skippedTuples;
  nlohmann::ordered_json cexs = nlohmann::ordered_json::array();
  for (const auto& c : counterexamples) cexs.push_back({{"kind", c.kind}, {"detail", c.detail}});
  j["counterexamples"] = std::move(cexs);
  return j.dump(2);
}

std::string SimulationReport::to_text() const {
  std::ostringstream os;
  os << "N=" << checkedN << ": " << concreteStateCount << " states, "
     << concreteTransitionCount << " transitions; simulation "
     << (simulationHolds ? "holds" : "FAILS") << ", strongest "
     << (strongestHolds ? "holds" : "FAILS");
  if (skippedTuples) os << " (" << skippedTuples << " tuples skipped: unrealized at this N)";
  for (const auto& c : counterexamples) os << "\n  [" << c.kind << "] " << c.detail;
  return os.str();
}

// ------------------------------------------------ compiled concrete model

namespace {

// data formulas compiled to postfix programs over per-process array values
struct DataProg {
  enum class Op : uint8_t { True, False, EqConst, EqArr, Not, And, Or };
  struct Ins {
    Op op;
    int a = 0, b = 0, val = 0, n = 0;
  };
  std::vector<Ins> ins;
};

struct PairView {
  const ConcreteState* pre = nullptr;
  const ConcreteState* post = nullptr;
  int64_t at(int arr, bool primed, int64_t p) const {
    const ConcreteState* st = primed ? post : pre;
    return st->arrs[arr][p];
  }
};

void compile_data(const Formula& f, DataProg& prog) {
  switch (f->k) {
    case FNode::K::True: prog.ins.push_back({DataProg::Op::True}); return;
    case FNode::K::False: prog.ins.push_back({DataProg::Op::False}); return;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      if (a.k == Atom::K::DataEqConst) {
        prog.ins.push_back({DataProg::Op::EqConst, a.arrA * 2 + a.primedA, 0, a.valIdx, 0});
      } else if (a.k == Atom::K::DataEqArr) {
        prog.ins.push_back(
            {DataProg::Op::EqArr, a.arrA * 2 + a.primedA, a.arrB * 2 + a.primedB, 0, 0});
      } else {
        fail(ErrKind::Internal, "compile_data: arithmetic atom in data part");
      }
      return;
    }
    case FNode::K::Not:
      compile_data(f->kids[0], prog);
      prog.ins.push_back({DataProg::Op::Not});
      return;
    case FNode::K::And:
    case FNode::K::Or: {
      for (const auto& kid : f->kids) compile_data(kid, prog);
      prog.ins.push_back({f->k == FNode::K::And ? DataProg::Op::And : DataProg::Op::Or, 0, 0, 0,
                          (int)f->kids.size()});
      return;
    }
    default: fail(ErrKind::Internal, "compile_data: quantifier in data part");
  }
}

bool eval_data(const DataProg& prog, const PairView& v, int64_t p) {
  bool stack[64];
  int sp = 0;
  for (const auto& i : prog.ins) {
    switch (i.op) {
      case DataProg::Op::True: stack[sp++] = true; break;
      case DataProg::Op::False: stack[sp++] = false; break;
      case DataProg::Op::EqConst:
        stack[sp++] = v.at(i.a / 2, i.a & 1, p) == i.val;
        break;
      case DataProg::Op::EqArr:
        stack[sp++] = v.at(i.a / 2, i.a & 1, p) == v.at(i.b / 2, i.b & 1, p);
        break;
      case DataProg::Op::Not: stack[sp - 1] = !stack[sp - 1]; break;
      case DataProg::Op::And: {
        bool r = true;
        for (int k = 0; k < i.n; ++k) r = r && stack[--sp];
        stack[sp++] = r;
        break;
      }
      case DataProg::Op::Or: {
        bool r = false;
        for (int k = 0; k < i.n; ++k) r = r || stack[--sp];
        stack[sp++] = r;
        break;
      }
    }
  }
  return stack[0];
}

// arithmetic terms compiled over ground slots, u slots and per-process reads
struct TermProg {
  enum class Op : uint8_t { Num, Ground, U, Read, Add, Sub, Mul, Div };
  struct Node {
    Op op;
    int64_t num = 0;
    int a = -1, b = -1; // child node indices
    int slot = 0;       // Ground/U index; Read: arr*2+primed
  };
  std::vector<Node> nodes;
  int root = -1;
};

struct LitProg {
  bool neg = false;
  uint8_t kind; // 0 eq, 1 lt, 2 le, 3 cong
  int64_t mod = 0;
  TermProg lhs, rhs;
};

struct CaseProg {
  std::vector<LitProg> lits;
  std::vector<int> uSlots;  // which u slots this case reads
  bool perProcessArith = false;
  DataProg data;
};

struct GroundLayout {
  std::map<Sym, int> symSlot;   // params, intvars(+'), counters(+')
  std::vector<Term> cards;      // opaque card terms by slot order (after syms)
  std::map<std::string, int> cardSlot; // print key -> slot
  int nSlots = 0;
};

struct SpecModel {
  const front::SystemSpec* spec;
  std::vector<bool> trimmed; // per array
  std::vector<std::pair<int, bool>> uReads; // (arr, primed) -> u index
  GroundLayout ground;
  std::vector<CaseProg> phiCases, initCases, transCases;
  // card classification: 0 pre-only, 1 post-only (body unprimed), 2 mixed
  struct CardInfo {
    int cls;
    Formula body; // for cls 1: unprimed copy; binder normalized
    std::string var;
  };
  std::vector<CardInfo> cardInfos;
  std::vector<std::vector<int64_t>> intvarDomains;
  int64_t uLo = 0, uHi = 0;
};

Formula unprime_reads(const Formula& f) {
  switch (f->k) {
    case FNode::K::True:
    case FNode::K::False: return f;
    case FNode::K::Atom: {
      Atom a = f->atom;
      if (a.k == Atom::K::DataEqConst || a.k == Atom::K::DataEqArr) {
        a.primedA = false;
        if (a.k == Atom::K::DataEqArr) a.primedB = false;
      }
      return f_atom(std::move(a));
    }
    case FNode::K::Not: return f_not(unprime_reads(f->kids[0]));
    case FNode::K::And:
    case FNode::K::Or: {
      std::vector<Formula> kids;
      for (const auto& kid : f->kids) kids.push_back(unprime_reads(kid));
      return f->k == FNode::K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    default: fail(ErrKind::Internal, "unprime_reads: quantifier");
  }
}

struct ModelBuilder {
  SpecModel m;
  const front::SystemSpec* spec;

  explicit ModelBuilder(const front::SystemSpec& s) : spec(&s) {
    m.spec = &s;
    detect_trimmed();
    layout_ground();
    for (const auto& tc : s.invariantPhi) m.phiCases.push_back(compile_case(tc));
    m.initCases.push_back(compile_case(s.init));
    for (const auto& tc : s.transCases) m.transCases.push_back(compile_case(tc));
    intvar_domains();
  }

  void detect_trimmed() {
    const Vocab& v = *spec->vocab;
    std::vector<bool> unprimedUse(v.arrays.size(), false);
    auto scanCase = [&](const TransitionCase& tc) {
      auto scan = [&](const Formula& f) {
        for (const auto& [arr, primed] : free_symbols(f).arrays)
          if (!primed) unprimedUse[arr] = true;
      };
      for (const auto& lit : tc.arithLits) scan(lit);
      scan(tc.dataPart);
    };
    for (const auto& tc : spec->invariantPhi) scanCase(tc);
    scanCase(spec->init);
    for (const auto& tc : spec->transCases) scanCase(tc);
    m.trimmed.assign(v.arrays.size(), false);
    for (size_t i = 0; i < v.arrays.size(); ++i)
      if (v.arrays[i].kind == ArrayKind::Arithmetic && !unprimedUse[i]) m.trimmed[i] = true;
  }

  void layout_ground() {
    const Vocab& v = *spec->vocab;
    int slot = 0;
    for (const auto& p : v.params) m.ground.symSlot[{SymKind::Param, p, false}] = slot++;
    for (const auto& iv : v.intvars) {
      m.ground.symSlot[{SymKind::IntVar, iv.name, false}] = slot++;
      m.ground.symSlot[{SymKind::IntVar, iv.name, true}] = slot++;
    }
    for (const auto& c : v.counters) {
      m.ground.symSlot[{SymKind::Counter, c.name, false}] = slot++;
      m.ground.symSlot[{SymKind::Counter, c.name, true}] = slot++;
    }
    m.ground.nSlots = slot;
  }

  int card_slot(const Term& card) {
    std::string key = print_term(card, nullptr);
    auto it = m.ground.cardSlot.find(key);
    if (it != m.ground.cardSlot.end()) return it->second;
    int slot = m.ground.nSlots++;
    m.ground.cardSlot[key] = slot;
    m.ground.cards.push_back(card);
    bool anyPrimed = false, anyUnprimed = false;
    for (const auto& [arr, primed] : free_symbols(card->body).arrays)
      (primed ? anyPrimed : anyUnprimed) = true;
    SpecModel::CardInfo info;
    info.var = card->var;
    if (anyPrimed && anyUnprimed) {
      info.cls = 2;
      info.body = card->body;
    } else if (anyPrimed) {
      info.cls = 1;
      info.body = unprime_reads(card->body);
    } else {
      info.cls = 0;
      info.body = card->body;
    }
    m.cardInfos.push_back(std::move(info));
    return slot;
  }

  int u_slot(int arr, bool primed) {
    for (size_t i = 0; i < m.uReads.size(); ++i)
      if (m.uReads[i] == std::make_pair(arr, primed)) return (int)i;
    m.uReads.push_back({arr, primed});
    return (int)m.uReads.size() - 1;
  }

  int compile_term(const Term& t, TermProg& prog, CaseProg& cp) {
    auto push = [&](TermProg::Node n) {
      prog.nodes.push_back(n);
      return (int)prog.nodes.size() - 1;
    };
    switch (t->k) {
      case TermNode::K::Num: {
        TermProg::Node n{TermProg::Op::Num};
        n.num = (int64_t)t->num;
        return push(n);
      }
      case TermNode::K::SymRef: {
        auto it = m.ground.symSlot.find(t->sym);
        if (it == m.ground.symSlot.end())
          fail(ErrKind::UnboundSymbol, "oracle: unbound symbol " + print_sym(t->sym));
        TermProg::Node n{TermProg::Op::Ground};
        n.slot = it->second;
        return push(n);
      }
      case TermNode::K::Read: {
        if (m.trimmed[t->array]) {
          int u = u_slot(t->array, t->primed);
          if (std::find(cp.uSlots.begin(), cp.uSlots.end(), u) == cp.uSlots.end())
            cp.uSlots.push_back(u);
          TermProg::Node n{TermProg::Op::U};
          n.slot = u;
          return push(n);
        }
        cp.perProcessArith = true;
        TermProg::Node n{TermProg::Op::Read};
        n.slot = t->array * 2 + t->primed;
        return push(n);
      }
      case TermNode::K::Card: {
        TermProg::Node n{TermProg::Op::Ground};
        n.slot = card_slot(t);
        return push(n);
      }
      case TermNode::K::Add:
      case TermNode::K::Sub: {
        int a = compile_term(t->a, prog, cp);
        int b = compile_term(t->b, prog, cp);
        TermProg::Node n{t->k == TermNode::K::Add ? TermProg::Op::Add : TermProg::Op::Sub};
        n.a = a;
        n.b = b;
        return push(n);
      }
      case TermNode::K::Mul: {
        int a = compile_term(t->a, prog, cp);
        TermProg::Node n{TermProg::Op::Mul};
        n.a = a;
        n.num = (int64_t)t->num;
        return push(n);
      }
      case TermNode::K::FloorDiv: {
        int a = compile_term(t->a, prog, cp);
        TermProg::Node n{TermProg::Op::Div};
        n.a = a;
        n.num = (int64_t)t->num;
        return push(n);
      }
    }
    fail(ErrKind::Internal, "compile_term fell through");
  }

  CaseProg compile_case(const TransitionCase& tc) {
    CaseProg cp;
    for (const auto& lit : tc.arithLits) {
      LitProg lp;
      const Formula* core = &lit;
      if ((*core)->k == FNode::K::Not) {
        lp.neg = true;
        core = &(*core)->kids[0];
      }
      const Atom& a = (*core)->atom;
      if (a.k == Atom::K::Cong) {
        lp.kind = 3;
        lp.mod = (int64_t)a.mod;
      } else {
        lp.kind = a.op == CmpOp::Eq ? 0 : a.op == CmpOp::Lt ? 1 : 2;
      }
      lp.lhs.root = compile_term(a.lhs, lp.lhs, cp);
      lp.rhs.root = compile_term(a.rhs, lp.rhs, cp);
      cp.lits.push_back(std::move(lp));
    }
    compile_data(simplify(tc.dataPart, spec->vocab.get()), cp.data);
    return cp;
  }

  void intvar_domains() {
    const Vocab& v = *spec->vocab;
    std::set<int64_t> nums{0, 1};
    auto scanLit = [&](const Formula& lit) {
      FreeSymbols fs = free_symbols(lit);
      bool mentionsIv = false;
      for (const auto& s : fs.syms)
        if (s.kind == SymKind::IntVar) mentionsIv = true;
      if (!mentionsIv) return;
      std::function<void(const Term&)> scanT = [&](const Term& t) {
        switch (t->k) {
          case TermNode::K::Num: nums.insert((int64_t)t->num); break;
          case TermNode::K::Add:
          case TermNode::K::Sub:
            scanT(t->a);
            scanT(t->b);
            break;
          case TermNode::K::Mul:
          case TermNode::K::FloorDiv: scanT(t->a); break;
          default: break;
        }
      };
      std::function<void(const Formula&)> scanF = [&](const Formula& f) {
        if (f->k == FNode::K::Atom) {
          if (f->atom.k == Atom::K::Cmp || f->atom.k == Atom::K::Cong) {
            scanT(f->atom.lhs);
            scanT(f->atom.rhs);
          }
          return;
        }
        for (const auto& kid : f->kids) scanF(kid);
      };
      scanF(lit);
    };
    auto scanCase = [&](const TransitionCase& tc) {
      for (const auto& lit : tc.arithLits) scanLit(lit);
    };
    for (const auto& tc : spec->invariantPhi) scanCase(tc);
    scanCase(spec->init);
    for (const auto& tc : spec->transCases) scanCase(tc);
    m.intvarDomains.assign(v.intvars.size(), {nums.begin(), nums.end()});
  }
};

int64_t eval_term_prog(const TermProg& prog, int node, const std::vector<int64_t>& ground,
                       const int64_t* uVals, const PairView& view, int64_t p) {
  const TermProg::Node& n = prog.nodes[node];
  switch (n.op) {
    case TermProg::Op::Num: return n.num;
    case TermProg::Op::Ground: return ground[n.slot];
    case TermProg::Op::U: return uVals[n.slot];
    case TermProg::Op::Read: return view.at(n.slot / 2, n.slot & 1, p);
    case TermProg::Op::Add:
      return eval_term_prog(prog, n.a, ground, uVals, view, p) +
             eval_term_prog(prog, n.b, ground, uVals, view, p);
    case TermProg::Op::Sub:
      return eval_term_prog(prog, n.a, ground, uVals, view, p) -
             eval_term_prog(prog, n.b, ground, uVals, view, p);
    case TermProg::Op::Mul: return n.num * eval_term_prog(prog, n.a, ground, uVals, view, p);
    case TermProg::Op::Div:
      return floor_div64(eval_term_prog(prog, n.a, ground, uVals, view, p), n.num);
  }
  return 0;
}

bool eval_lit(const LitProg& lp, const std::vector<int64_t>& ground, const int64_t* uVals,
              const PairView& view, int64_t p) {
  int64_t l = eval_term_prog(lp.lhs, lp.lhs.root, ground, uVals, view, p);
  int64_t r = eval_term_prog(lp.rhs, lp.rhs.root, ground, uVals, view, p);
  bool v = false;
  switch (lp.kind) {
    case 0: v = l == r; break;
    case 1: v = l < r; break;
    case 2: v = l <= r; break;
    case 3: v = pos_mod64(l - r, lp.mod) == 0; break;
  }
  return lp.neg ? !v : v;
}

bool case_arith_holds(const CaseProg& cp, const std::vector<int64_t>& ground, const int64_t* uVals,
                      const PairView& view, int64_t p) {
  for (const auto& lit : cp.lits)
    if (!eval_lit(lit, ground, uVals, view, p)) return false;
  return true;
}

// exists u in [lo,hi]^k satisfying the case's literals
bool case_u_feasible(const CaseProg& cp, const SpecModel& m, const std::vector<int64_t>& ground,
                     const PairView& view, int64_t p) {
  size_t k = cp.uSlots.size();
  std::vector<int64_t> uVals(m.uReads.size(), 0);
  if (k == 0) return case_arith_holds(cp, ground, uVals.data(), view, p);
  std::vector<int64_t> cur(k, m.uLo);
  for (;;) {
    for (size_t i = 0; i < k; ++i) uVals[cp.uSlots[i]] = cur[i];
    if (case_arith_holds(cp, ground, uVals.data(), view, p)) return true;
    size_t i = 0;
    for (; i < k; ++i) {
      if (++cur[i] <= m.uHi) break;
      cur[i] = m.uLo;
    }
    if (i == k) return false;
  }
}

// per-state precomputation
struct StateInfo {
  std::vector<int64_t> counters;
  std::vector<int64_t> primableCards; // values of cls-0/cls-1 card bodies on this state
  std::vector<int64_t> ints;
  int infoId = -1;
};

struct Runner {
  const SpecModel& m;
  int64_t N;
  Options opts;
  std::vector<ConcreteState> states;
  std::vector<StateInfo> infos;
  std::map<std::tuple<std::vector<int64_t>, std::vector<int64_t>, std::vector<int64_t>>, int>
      infoIds;
  std::unordered_map<uint64_t, uint64_t> feasMemo; // (infoA,infoB) -> case bitmask (+valid bit)
  std::vector<int64_t> groundBuf;

  Runner(const SpecModel& model, int64_t n, const Options& o) : m(model), N(n), opts(o) {
    groundBuf.resize(m.ground.nSlots, 0);
  }

  int64_t count_card(const Formula& body, const std::string& var, const ConcreteState& s) const {
    EvalCtx ctx;
    ctx.vocab = m.spec->vocab.get();
    ctx.pre = &s;
    int64_t cnt = 0;
    for (int64_t p = 0; p < s.n; ++p) {
      ctx.procVars[var] = p;
      if (eval_formula(body, ctx)) ++cnt;
    }
    return cnt;
  }

  StateInfo make_info(const ConcreteState& s) {
    StateInfo info;
    const Vocab& v = *m.spec->vocab;
    for (const auto& c : v.counters) {
      Formula body = c.body;
      info.counters.push_back(count_card(body, c.boundVar, s));
    }
    for (const auto& ci : m.cardInfos)
      info.primableCards.push_back(ci.cls == 2 ? 0 : count_card(ci.body, ci.var, s));
    for (const auto& iv : v.intvars) info.ints.push_back(s.ints.at(iv.name));
    auto key = std::make_tuple(info.counters, info.primableCards, info.ints);
    auto [it, inserted] = infoIds.emplace(key, (int)infoIds.size());
    info.infoId = it->second;
    return info;
  }

  // ground slot values for the pair (pre, post); cls-2 cards evaluated here
  void fill_ground(const ConcreteState& s, const ConcreteState* post, const StateInfo& si,
                   const StateInfo* pi) {
    const Vocab& v = *m.spec->vocab;
    for (const auto& [sym, slot] : m.ground.symSlot) {
      switch (sym.kind) {
        case SymKind::Param: groundBuf[slot] = s.params.at(sym.name); break;
        case SymKind::IntVar: {
          const ConcreteState* st = sym.primed ? post : &s;
          groundBuf[slot] = st ? st->ints.at(sym.name) : 0;
          break;
        }
        case SymKind::Counter: {
          const StateInfo* inf = sym.primed ? pi : &si;
          groundBuf[slot] =
              inf ? inf->counters[v.counter_index(sym.name)] : 0;
          break;
        }
        default: break;
      }
    }
    for (size_t i = 0; i < m.cardInfos.size(); ++i) {
      int slot = (int)(m.ground.symSlot.size() + i);
      const auto& ci = m.cardInfos[i];
      if (ci.cls == 0) {
        groundBuf[slot] = si.primableCards[i];
      } else if (ci.cls == 1) {
        groundBuf[slot] = pi ? pi->primableCards[i] : 0;
      } else {
        // mixed pre/post card: evaluate on the pair
        EvalCtx ctx;
        ctx.vocab = m.spec->vocab.get();
        ctx.pre = &s;
        ctx.post = post;
        int64_t cnt = 0;
        for (int64_t p = 0; p < s.n; ++p) {
          ctx.procVars[ci.var] = p;
          if (eval_formula(ci.body, ctx)) ++cnt;
        }
        groundBuf[slot] = cnt;
      }
    }
  }

  // state formula: disjunction of forall-cases over a single state
  bool state_formula_holds(const std::vector<CaseProg>& cases, const ConcreteState& s,
                           const StateInfo& si, bool emptyIsTrue) {
    if (cases.empty()) return emptyIsTrue;
    fill_ground(s, nullptr, si, nullptr);
    PairView view{&s, nullptr};
    std::vector<int64_t> uVals(m.uReads.size(), 0);
    for (const auto& cp : cases) {
      bool all = true;
      for (int64_t p = 0; p < s.n && all; ++p)
        all = case_arith_holds(cp, groundBuf, uVals.data(), view, p) && eval_data(cp.data, view, p);
      if (all) return true;
    }
    return false;
  }

  // feasibility bitmask over transition cases for the pair's ground values
  uint64_t trans_feasible(const ConcreteState& s, const ConcreteState& s2, const StateInfo& si,
                          const StateInfo& pi) {
    bool cacheable = true;
    for (const auto& ci : m.cardInfos)
      if (ci.cls == 2) cacheable = false;
    for (const auto& cp : m.transCases)
      if (cp.perProcessArith) cacheable = false;
    uint64_t key = ((uint64_t)si.infoId << 32) | (uint64_t)pi.infoId;
    if (cacheable) {
      auto it = feasMemo.find(key);
      if (it != feasMemo.end()) return it->second;
    }
    fill_ground(s, &s2, si, &pi);
    PairView view{&s, &s2};
    uint64_t mask = 0;
    for (size_t c = 0; c < m.transCases.size(); ++c) {
      const CaseProg& cp = m.transCases[c];
      if (cp.perProcessArith) continue; // handled per process
      if (case_u_feasible(cp, m, groundBuf, view, 0)) mask |= (1ull << c);
    }
    if (cacheable) feasMemo.emplace(key, mask);
    return mask;
  }

  bool is_transition(const ConcreteState& s, const ConcreteState& s2, const StateInfo& si,
                     const StateInfo& pi) {
    uint64_t feas = trans_feasible(s, s2, si, pi);
    // fill_ground was just called for this pair inside trans_feasible only on
    // cache miss; refresh for per-process evaluation
    fill_ground(s, &s2, si, &pi);
    PairView view{&s, &s2};
    for (int64_t p = 0; p < s.n; ++p) {
      bool ok = false;
      for (size_t c = 0; c < m.transCases.size() && !ok; ++c) {
        const CaseProg& cp = m.transCases[c];
        if (cp.perProcessArith) {
          ok = eval_data(cp.data, view, p) && case_u_feasible(cp, m, groundBuf, view, p);
        } else {
          ok = (feas & (1ull << c)) && eval_data(cp.data, view, p);
        }
      }
      if (!ok) return false;
    }
    return true;
  }
};

SpecModel build_model(const front::SystemSpec& spec, int64_t N, const Options& opts,
                      std::vector<std::string>* notes) {
  ModelBuilder b(spec);
  SpecModel m = std::move(b.m);
  m.uLo = opts.arithLo;
  m.uHi = opts.arithHi.value_or(N);
  if (m.transCases.size() > 63)
    fail(ErrKind::StateBudgetExceeded, "more than 63 transition cases");
  if (notes) {
    // bound adequacy: every u read should be upper-bounded by a cardinality
    // or an N-linear term in some literal of each case using it
    for (size_t ui = 0; ui < m.uReads.size(); ++ui) {
      const auto& [arr, primed] = m.uReads[ui];
      std::string nm = spec.vocab->arrays[arr].name + (primed ? "'" : "");
      notes->push_back("arithmetic array " + nm + " bounded to [" + std::to_string(m.uLo) + "," +
                       std::to_string(m.uHi) + "] (adequate when guards compare it against "
                       "cardinalities or N-linear thresholds)");
    }
  }
  return m;
}

} // namespace

// ------------------------------------------------------- state enumeration

std::vector<ConcreteState> enumerate_states(const front::SystemSpec& spec, int64_t N,
                                            const Options& opts,
                                            std::vector<std::string>* notes) {
  if (N < 1) fail(ErrKind::Config, "N must be at least 1");
  const Vocab& v = *spec.vocab;
  SpecModel m = build_model(spec, N, opts, notes);
  Runner runner(m, N, opts);

  ConcreteState proto;
  proto.n = N;
  proto.params["N"] = N;
  for (const auto& p : v.params) {
    if (p == "N") continue;
    auto it = opts.params.find(p);
    if (it == opts.params.end())
      fail(ErrKind::Config, "no value supplied for parameter " + p);
    proto.params[p] = it->second;
  }
  proto.arrs.resize(v.arrays.size());

  // dimension order: intvars, then arrays (per process)
  struct Dim {
    int kind; // 0 intvar, 1 array cell
    int idx;  // intvar idx or array idx
    int64_t proc = 0;
    std::vector<int64_t> domain;
  };
  std::vector<Dim> dims;
  for (size_t i = 0; i < v.intvars.size(); ++i)
    dims.push_back({0, (int)i, 0, m.intvarDomains[i]});
  int64_t lo = opts.arithLo, hi = opts.arithHi.value_or(N);
  for (size_t a = 0; a < v.arrays.size(); ++a) {
    if (v.arrays[a].kind == ArrayKind::Arithmetic && m.trimmed[a]) continue;
    std::vector<int64_t> dom;
    if (v.arrays[a].kind == ArrayKind::Enumerated) {
      for (size_t val = 0; val < v.sorts[v.arrays[a].sortIdx].values.size(); ++val)
        dom.push_back((int64_t)val);
    } else {
      for (int64_t val = lo; val <= hi; ++val) dom.push_back(val);
    }
    for (int64_t p = 0; p < N; ++p) dims.push_back({1, (int)a, p, dom});
    proto.arrs[a].assign(N, 0);
  }
  double total = 1;
  for (const auto& d : dims) total *= (double)d.domain.size();
  if (total > (double)opts.stateBudget)
    fail(ErrKind::StateBudgetExceeded,
         "state space of about " + std::to_string((uint64_t)total) + " exceeds budget " +
             std::to_string(opts.stateBudget));

  std::vector<ConcreteState> out;
  std::vector<size_t> idx(dims.size(), 0);
  for (;;) {
    ConcreteState s = proto;
    for (size_t d = 0; d < dims.size(); ++d) {
      int64_t val = dims[d].domain[idx[d]];
      if (dims[d].kind == 0)
        s.ints[v.intvars[dims[d].idx].name] = val;
      else
        s.arrs[dims[d].idx][dims[d].proc] = val;
    }
    StateInfo si = runner.make_info(s);
    if (runner.state_formula_holds(m.phiCases, s, si, true)) out.push_back(std::move(s));
    size_t d = dims.size();
    while (d-- > 0) {
      if (++idx[d] < dims[d].domain.size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (dims.empty()) return out;
  }
}

std::vector<int64_t> project_state(const front::SystemSpec& spec, const ConcreteState& s) {
  std::vector<int64_t> out;
  EvalCtx ctx;
  ctx.vocab = spec.vocab.get();
  ctx.pre = &s;
  for (const auto& c : spec.vocab->counters) {
    int64_t cnt = 0;
    for (int64_t p = 0; p < s.n; ++p) {
      ctx.procVars[c.boundVar] = p;
      if (eval_formula(c.body, ctx)) ++cnt;
    }
    ctx.procVars.erase(c.boundVar);
    out.push_back(cnt);
  }
  return out;
}

void enumerate_transitions(
    const front::SystemSpec& spec, int64_t N, const Options& opts,
    const std::function<void(const ConcreteState&, const ConcreteState&)>& sink) {
  SpecModel m = build_model(spec, N, opts, nullptr);
  Runner runner(m, N, opts);
  std::vector<ConcreteState> states = enumerate_states(spec, N, opts);
  std::vector<StateInfo> infos;
  infos.reserve(states.size());
  for (const auto& s : states) infos.push_back(runner.make_info(s));
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = 0; j < states.size(); ++j)
      if (runner.is_transition(states[i], states[j], infos[i], infos[j]))
        sink(states[i], states[j]);
}

// --------------------------------------------------- compiled abstraction

CompiledCS compile_cs(const CounterSystem& cs) {
  CompiledCS c;
  c.cs = &cs;
  int slot = 0;
  for (const auto& s : cs.params) c.slot[s] = slot++;
  c.nParams = slot;
  for (const auto& s : cs.intvars) c.slot[s] = slot++;
  c.nInts = (int)cs.intvars.size();
  for (const auto& s : cs.counters) c.slot[s] = slot++;
  c.nCtrs = (int)cs.counters.size();
  for (const auto& s : cs.intvars) {
    Sym v = s;
    v.primed = true;
    c.slot[v] = slot++;
  }
  for (const auto& s : cs.counters) {
    Sym v = s;
    v.primed = true;
    c.slot[v] = slot++;
  }
  for (const auto& d : cs.locals) c.slot[d.sym] = slot++;
  c.nLocals = (int)cs.locals.size();
  c.nSlots = slot;

  for (const auto& d : cs.locals) {
    CompiledCS::CLocal cl;
    cl.div = (int64_t)d.div;
    auto lin = linearize(d.num, nullptr);
    if (lin && std::all_of(lin->c.begin(), lin->c.end(),
                           [&](const auto& kv) { return c.slot.count(kv.first) > 0; })) {
      cl.functional = true;
      cl.k = (int64_t)lin->k;
      for (const auto& [s, coeff] : lin->c) cl.lin.push_back({c.slot.at(s), (int64_t)coeff});
    }
    c.locals.push_back(std::move(cl));
  }

  auto compileDisjuncts = [&](const std::vector<pipe::Disjunct>& ds) {
    std::vector<CompiledCS::CDisj> out;
    for (const auto& d : ds) {
      CompiledCS::CDisj cd;
      for (const auto& con : d.cons.cons) {
        CompiledCS::CCon cc;
        cc.kind = con.k;
        cc.k = (int64_t)con.lin.k;
        cc.mod = con.mod == 0 ? 0 : (int64_t)con.mod;
        for (const auto& [s, coeff] : con.lin.c) {
          auto it = c.slot.find(s);
          if (it == c.slot.end())
            fail(ErrKind::Internal, "compile_cs: unbound symbol " + print_sym(s));
          cc.terms.push_back({it->second, (int64_t)coeff});
        }
        cd.cons.push_back(std::move(cc));
      }
      out.push_back(std::move(cd));
    }
    return out;
  };
  c.phi0 = compileDisjuncts(cs.phi0);
  c.iota0 = compileDisjuncts(cs.iota0);
  c.tau0 = compileDisjuncts(cs.tau0);
  return c;
}

void CompiledCS::fill_locals(std::vector<int64_t>& slots) const {
  int base = nSlots - nLocals;
  for (int i = 0; i < nLocals; ++i) {
    const CLocal& cl = locals[i];
    if (!cl.functional) continue; // searched during disjunct evaluation
    int64_t v = cl.k;
    for (const auto& [slot, coeff] : cl.lin) v += coeff * slots[slot];
    slots[base + i] = floor_div64(v, cl.div);
  }
}

bool CompiledCS::eval_disjunct(const CDisj& d, const std::vector<int64_t>& slots) const {
  for (const auto& con : d.cons) {
    int64_t v = con.k;
    for (const auto& [slot, coeff] : con.terms) v += coeff * slots[slot];
    switch (con.kind) {
      case LinCon::K::Eq:
        if (v != 0) return false;
        break;
      case LinCon::K::Le:
        if (v > 0) return false;
        break;
      case LinCon::K::Lt:
        if (v >= 0) return false;
        break;
      case LinCon::K::Cong:
        if (pos_mod64(v, con.mod) != 0) return false;
        break;
      case LinCon::K::NCong:
        if (pos_mod64(v, con.mod) == 0) return false;
        break;
    }
  }
  return true;
}

bool CompiledCS::eval_any(const std::vector<CDisj>& ds, std::vector<int64_t>& slots) const {
  fill_locals(slots);
  bool anySearched = false;
  for (int i = 0; i < nLocals; ++i)
    if (!locals[i].functional) anySearched = true;
  if (!anySearched) {
    for (const auto& d : ds)
      if (eval_disjunct(d, slots)) return true;
    return false;
  }
  // rare path: per-process floor-div witnesses survive as plain existentials
  int64_t maxAbs = 1;
  for (int64_t v : slots) maxAbs = std::max(maxAbs, v < 0 ? -v : v);
  int64_t bound = 0;
  for (const auto& d : ds)
    for (const auto& con : d.cons) {
      int64_t b = std::abs(con.k);
      for (const auto& [slot, coeff] : con.terms) b += std::abs(coeff) * maxAbs;
      bound = std::max(bound, b + (con.mod > 0 ? con.mod : 0));
    }
  std::vector<int> searched;
  int base = nSlots - nLocals;
  for (int i = 0; i < nLocals; ++i)
    if (!locals[i].functional) searched.push_back(base + i);
  std::function<bool(size_t, const CDisj&)> trySearch = [&](size_t si, const CDisj& d) -> bool {
    if (si == searched.size()) return eval_disjunct(d, slots);
    for (int64_t v = -bound; v <= bound; ++v) {
      slots[searched[si]] = v;
      if (trySearch(si + 1, d)) return true;
    }
    return false;
  };
  for (const auto& d : ds) {
    std::vector<int64_t> saved = slots;
    if (trySearch(0, d)) return true;
    slots = saved;
  }
  return false;
}

bool CompiledCS::eval_state(const std::vector<CDisj>& ds, int64_t N,
                            const std::map<std::string, int64_t>& params,
                            const AbstractState& a) const {
  std::vector<int64_t> slots(nSlots, 0);
  for (int i = 0; i < nParams; ++i) {
    const std::string& nm = cs->params[i].name;
    slots[i] = nm == "N" ? N : params.at(nm);
  }
  for (int i = 0; i < nInts; ++i) slots[nParams + i] = a.iv[i];
  for (int i = 0; i < nCtrs; ++i) slots[nParams + nInts + i] = a.z[i];
  auto copy = slots;
  return eval_any(ds, copy);
}

bool CompiledCS::eval_pair(int64_t N, const std::map<std::string, int64_t>& params,
                           const AbstractState& pre, const AbstractState& post) const {
  std::vector<int64_t> slots(nSlots, 0);
  for (int i = 0; i < nParams; ++i) {
    const std::string& nm = cs->params[i].name;
    slots[i] = nm == "N" ? N : params.at(nm);
  }
  for (int i = 0; i < nInts; ++i) slots[nParams + i] = pre.iv[i];
  for (int i = 0; i < nCtrs; ++i) slots[nParams + nInts + i] = pre.z[i];
  int pbase = nParams + nInts + nCtrs;
  for (int i = 0; i < nInts; ++i) slots[pbase + i] = post.iv[i];
  for (int i = 0; i < nCtrs; ++i) slots[pbase + nInts + i] = post.z[i];
  auto copy = slots;
  return eval_any(tau0, copy);
}

// ------------------------------------------------------------ check ops

bool counters_are_cell_partition(const front::SystemSpec& spec) {
  pipe::CellSpace cells = pipe::build_cells(spec, false, 1 << 20);
  const auto& ctrs = spec.vocab->counters;
  if (ctrs.size() != cells.cells.size()) return false;
  std::vector<int> counterCells(ctrs.size(), -1);
  for (size_t cellIdx = 0; cellIdx < cells.cells.size(); ++cellIdx) {
    int hits = 0;
    for (size_t ci = 0; ci < ctrs.size(); ++ci) {
      Formula body = rename_proc_var(ctrs[ci].body, ctrs[ci].boundVar, "$k");
      if (pipe::cell_satisfies(body, cells, cells.cells[cellIdx])) {
        ++hits;
        if (counterCells[ci] != -1) return false; // counter covers two cells
        counterCells[ci] = (int)cellIdx;
      }
    }
    if (hits != 1) return false;
  }
  return true;
}

std::vector<std::vector<int64_t>> simplex_tuples(int k, int64_t N) {
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> cur(k, 0);
  std::function<void(int, int64_t)> rec = [&](int i, int64_t left) {
    if (i == k - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int64_t v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
  };
  if (k == 0) return out;
  rec(0, N);
  return out;
}

std::vector<std::vector<int64_t>> abstract_intvar_domains(const CounterSystem& cs) {
  std::set<int64_t> vals{0, 1};
  auto scan = [&](const std::vector<pipe::Disjunct>& ds) {
    for (const auto& d : ds)
      for (const auto& con : d.cons.cons) {
        bool iv = false;
        for (const auto& [s, c] : con.lin.c)
          if (s.kind == SymKind::IntVar) iv = true;
        if (!iv) continue;
        for (const auto& [s, c] : con.lin.c) {
          if (s.kind != SymKind::IntVar) continue;
          if ((c == 1 || c == -1) && con.lin.c.size() == 1)
            vals.insert((int64_t)Int(-con.lin.k * c));
        }
      }
  };
  scan(cs.phi0);
  scan(cs.iota0);
  scan(cs.tau0);
  std::vector<int64_t> dom(vals.begin(), vals.end());
  return std::vector<std::vector<int64_t>>(cs.intvars.size(), dom);
}

namespace {

std::vector<AbstractState> realizable_states(const front::SystemSpec& spec,
                                             const CounterSystem& cs, int64_t N,
                                             bool* bijective) {
  bool part = counters_are_cell_partition(spec);
  if (bijective) *bijective = part;
  std::vector<std::vector<int64_t>> zs;
  if (part) {
    zs = simplex_tuples((int)cs.counters.size(), N);
  } else {
    // bounded grid, necessary conditions only
    double total = 1;
    for (size_t i = 0; i < cs.counters.size(); ++i) total *= (double)(N + 1);
    if (total > 2e6)
      fail(ErrKind::StateBudgetExceeded, "abstract tuple grid too large for strongest check");
    std::vector<int64_t> cur(cs.counters.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == cur.size()) {
        zs.push_back(cur);
        return;
      }
      for (int64_t v = 0; v <= N; ++v) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  auto ivDomains = abstract_intvar_domains(cs);
  std::vector<AbstractState> out;
  std::vector<size_t> idx(ivDomains.size(), 0);
  for (const auto& z : zs) {
    if (ivDomains.empty()) {
      out.push_back({z, {}});
      continue;
    }
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      AbstractState a;
      a.z = z;
      for (size_t i = 0; i < ivDomains.size(); ++i) a.iv.push_back(ivDomains[i][idx[i]]);
      out.push_back(std::move(a));
      size_t d = ivDomains.size();
      bool done = true;
      while (d-- > 0) {
        if (++idx[d] < ivDomains[d].size()) {
          done = false;
          break;
        }
        idx[d] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

std::string cex_state(const ConcreteState& s, const Vocab& v) {
  std::ostringstream os;
  for (size_t a = 0; a < v.arrays.size(); ++a) {
    if (s.arrs[a].empty()) continue;
    if (os.tellp() > 0) os << " ";
    os << v.arrays[a].name << "=[";
    for (int64_t p = 0; p < s.n; ++p) {
      if (p) os << ",";
      if (v.arrays[a].kind == ArrayKind::Enumerated)
        os << v.sorts[v.arrays[a].sortIdx].values[s.arrs[a][p]];
      else
        os << s.arrs[a][p];
    }
    os << "]";
  }
  for (const auto& [nm, val] : s.ints) os << " " << nm << "=" << val;
  return os.str();
}

} // namespace

SimulationReport check_simulation(const front::SystemSpec& spec, const CounterSystem& cs,
                                  int64_t N, const Options& opts) {
  SimulationReport rep;
  rep.checkedN = N;
  SpecModel m = build_model(spec, N, opts, nullptr);
  Runner runner(m, N, opts);
  CompiledCS ccs = compile_cs(cs);
  std::map<std::string, int64_t> pvals = opts.params;

  std::vector<ConcreteState> states = enumerate_states(spec, N, opts);
  rep.concreteStateCount = states.size();
  std::vector<StateInfo> infos;
  infos.reserve(states.size());
  std::vector<AbstractState> projs;
  projs.reserve(states.size());
  for (const auto& s : states) {
    StateInfo si = runner.make_info(s);
    AbstractState a{si.counters, si.ints};
    infos.push_back(std::move(si));
    projs.push_back(std::move(a));
  }

  auto addCex = [&](const std::string& kind, const std::string& detail, bool strongestSide) {
    if (strongestSide)
      rep.strongestHolds = false;
    else
      rep.simulationHolds = false;
    if ((int)rep.counterexamples.size() < opts.cexLimit)
      rep.counterexamples.push_back({kind, detail});
  };

  // projected Phi-states satisfy Phi0; projected initial states satisfy iota0
  for (size_t i = 0; i < states.size(); ++i) {
    if (!ccs.eval_state(ccs.phi0, N, pvals, projs[i]))
      addCex("phi", "state " + cex_state(states[i], *spec.vocab) + " projects to " +
                        projs[i].str() + " violating Phi0",
             false);
    if (runner.state_formula_holds(m.initCases, states[i], infos[i], false)) {
      if (!ccs.eval_state(ccs.iota0, N, pvals, projs[i]))
        addCex("init", "initial state " + cex_state(states[i], *spec.vocab) + " projects to " +
                           projs[i].str() + " violating iota0",
               false);
    }
  }

  // every projected transition satisfies some tau0 disjunct
  std::map<std::pair<int, int>, bool> tauMemo; // (infoA, infoB) -> tau0 result
  for (size_t i = 0; i < states.size(); ++i) {
    for (size_t j = 0; j < states.size(); ++j) {
      if (!runner.is_transition(states[i], states[j], infos[i], infos[j])) continue;
      rep.concreteTransitionCount++;
      auto key = std::make_pair(infos[i].infoId, infos[j].infoId);
      auto it = tauMemo.find(key);
      bool ok;
      if (it != tauMemo.end()) {
        ok = it->second;
      } else {
        ok = ccs.eval_pair(N, pvals, projs[i], projs[j]);
        tauMemo.emplace(key, ok);
      }
      if (!ok)
        addCex("step", "transition " + cex_state(states[i], *spec.vocab) + " -> " +
                           cex_state(states[j], *spec.vocab) + " projects to " + projs[i].str() +
                           " -> " + projs[j].str() + " outside tau0",
               false);
    }
  }
  return rep;
}

SimulationReport check_strongest(const front::SystemSpec& spec, const CounterSystem& cs,
                                 int64_t N, const Options& opts) {
  SimulationReport rep;
  rep.checkedN = N;
  if (!cs.exact)
    fail(ErrKind::Config, "check_strongest requires an exact counter system (no fm relaxation)");
  SpecModel m = build_model(spec, N, opts, nullptr);
  Runner runner(m, N, opts);
  CompiledCS ccs = compile_cs(cs);
  std::map<std::string, int64_t> pvals = opts.params;

  std::vector<ConcreteState> states = enumerate_states(spec, N, opts);
  rep.concreteStateCount = states.size();
  std::vector<StateInfo> infos;
  std::map<AbstractState, std::vector<size_t>> byProj;
  std::set<AbstractState> initProjs;
  for (size_t i = 0; i < states.size(); ++i) {
    StateInfo si = runner.make_info(states[i]);
    AbstractState a{si.counters, si.ints};
    byProj[a].push_back(i);
    if (runner.state_formula_holds(m.initCases, states[i], si, false)) initProjs.insert(a);
    infos.push_back(std::move(si));
  }

  auto addCex = [&](const std::string& kind, const std::string& detail) {
    rep.strongestHolds = false;
    if ((int)rep.counterexamples.size() < opts.cexLimit)
      rep.counterexamples.push_back({kind, detail});
  };

  bool bijective = false;
  std::vector<AbstractState> tuples = realizable_states(spec, cs, N, &bijective);

  // iota0 / phi0 tuples need concrete witnesses
  for (const auto& a : tuples) {
    if (ccs.eval_state(ccs.phi0, N, pvals, a)) {
      if (!byProj.count(a)) {
        addCex("phi-witness", "Phi0 tuple " + a.str() + " has no concrete Phi-state at N=" +
                                  std::to_string(N));
      }
    }
    if (ccs.eval_state(ccs.iota0, N, pvals, a)) {
      if (!initProjs.count(a)) {
        if (byProj.count(a))
          addCex("init-witness", "iota0 tuple " + a.str() + " has no concrete initial state");
        else
          rep.skippedTuples++;
      }
    }
  }

  // tau0 pairs realizable at this N need witness transitions
  uint64_t checkedPairs = 0;
  for (const auto& t1 : tuples) {
    auto it1 = byProj.find(t1);
    for (const auto& t2 : tuples) {
      if (!ccs.eval_pair(N, pvals, t1, t2)) continue;
      checkedPairs++;
      auto it2 = byProj.find(t2);
      if (it1 == byProj.end() || it2 == byProj.end()) {
        rep.skippedTuples++;
        continue;
      }
      bool witnessed = false;
      // processes are interchangeable: one representative pre-state suffices
      // when the counters pin the full per-process valuation (bijective case)
      const std::vector<size_t>& preIdxs = it1->second;
      size_t preCount = bijective ? 1 : preIdxs.size();
      for (size_t pi = 0; pi < preCount && !witnessed; ++pi) {
        size_t i = preIdxs[pi];
        for (size_t j : it2->second) {
          if (runner.is_transition(states[i], states[j], infos[i], infos[j])) {
            witnessed = true;
            break;
          }
        }
      }
      if (!witnessed)
        addCex("step-witness",
               "tau0 pair " + t1.str() + " -> " + t2.str() + " has no concrete transition");
    }
  }
  rep.concreteTransitionCount = checkedPairs;
  return rep;
}

ReachResult bounded_reach(const CounterSystem& cs, int64_t N, const Formula& bad,
                          const Formula& strengthen, const Options& opts) {
  ReachResult res;
  CompiledCS ccs = compile_cs(cs);
  std::map<std::string, int64_t> pvals = opts.params;

  std::vector<std::vector<int64_t>> zs = simplex_tuples((int)cs.counters.size(), N);
  auto ivDomains = abstract_intvar_domains(cs);
  std::vector<AbstractState> all;
  for (const auto& z : zs) {
    std::vector<size_t> idx(ivDomains.size(), 0);
    for (;;) {
      AbstractState a;
      a.z = z;
      for (size_t i = 0; i < ivDomains.size(); ++i) a.iv.push_back(ivDomains[i][idx[i]]);
      all.push_back(std::move(a));
      size_t d = ivDomains.size();
      bool done = true;
      while (d-- > 0) {
        if (++idx[d] < ivDomains[d].size()) {
          done = false;
          break;
        }
        idx[d] = 0;
      }
      if (done || ivDomains.empty()) break;
    }
  }

  auto evalBad = [&](const AbstractState& a) {
    EvalCtx ctx;
    for (size_t i = 0; i < cs.params.size(); ++i)
      ctx.symEnv[cs.params[i]] = cs.params[i].name == "N" ? N : pvals.at(cs.params[i].name);
    for (size_t i = 0; i < cs.intvars.size(); ++i) ctx.symEnv[cs.intvars[i]] = a.iv[i];
    for (size_t i = 0; i < cs.counters.size(); ++i) ctx.symEnv[cs.counters[i]] = a.z[i];
    ctx.existsBound = 4 * (N + 2);
    return eval_formula(bad, ctx);
  };
  auto evalStrengthen = [&](const AbstractState& a) {
    if (!strengthen) return true;
    EvalCtx ctx;
    for (size_t i = 0; i < cs.params.size(); ++i)
      ctx.symEnv[cs.params[i]] = cs.params[i].name == "N" ? N : pvals.at(cs.params[i].name);
    for (size_t i = 0; i < cs.intvars.size(); ++i) ctx.symEnv[cs.intvars[i]] = a.iv[i];
    for (size_t i = 0; i < cs.counters.size(); ++i) ctx.symEnv[cs.counters[i]] = a.z[i];
    ctx.existsBound = 4 * (N + 2);
    return eval_formula(strengthen, ctx);
  };

  std::map<AbstractState, int> id;
  for (size_t i = 0; i < all.size(); ++i) id[all[i]] = (int)i;
  std::vector<int> parent(all.size(), -2); // -2 unvisited, -1 root
  std::deque<int> frontier;
  for (size_t i = 0; i < all.size(); ++i) {
    if (!ccs.eval_state(ccs.phi0, N, pvals, all[i])) continue;
    if (!ccs.eval_state(ccs.iota0, N, pvals, all[i])) continue;
    if (!evalStrengthen(all[i])) continue;
    parent[i] = -1;
    frontier.push_back((int)i);
  }

  auto emitTrace = [&](int i) {
    std::vector<AbstractState> trace;
    for (int cur = i; cur != -1; cur = parent[cur]) trace.push_back(all[cur]);
    std::reverse(trace.begin(), trace.end());
    res.trace = std::move(trace);
    res.reachable = true;
  };

  for (int i : frontier)
    if (evalBad(all[i])) {
      res.statesExplored = frontier.size();
      emitTrace(i);
      return res;
    }

  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    res.statesExplored++;
    for (size_t j = 0; j < all.size(); ++j) {
      if (parent[j] != -2) continue;
      if (!ccs.eval_state(ccs.phi0, N, pvals, all[j])) continue;
      if (!ccs.eval_pair(N, pvals, all[cur], all[j])) continue;
      parent[j] = cur;
      if (evalBad(all[j])) {
        emitTrace((int)j);
        return res;
      }
      frontier.push_back((int)j);
    }
  }
  return res;
}

EquivResult check_equiv_bounded(const Formula& fA, const Formula& fB, const Grid& grid) {
  EquivResult res;
  std::vector<size_t> idx(grid.ranges.size(), 0);
  for (;;) {
    EvalCtx ctx;
    ctx.existsBound = grid.existsBound;
    for (size_t i = 0; i < grid.ranges.size(); ++i) {
      const auto& [sym, lo, hi] = grid.ranges[i];
      (void)hi;
      ctx.symEnv[sym] = lo + (int64_t)idx[i];
    }
    if (eval_formula(fA, ctx) != eval_formula(fB, ctx)) {
      res.equivalent = false;
      res.counterexample = ctx.symEnv;
      return res;
    }
    size_t d = grid.ranges.size();
    bool done = true;
    while (d-- > 0) {
      const auto& [sym, lo, hi] = grid.ranges[d];
      if (lo + (int64_t)idx[d] + 1 <= hi) {
        idx[d]++;
        done = false;
        break;
      }
      idx[d] = 0;
    }
    if (done || grid.ranges.empty()) break;
  }
  return res;
}

} // namespace ctrabs::oracle
