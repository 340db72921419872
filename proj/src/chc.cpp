#include "ctrabs/chc.hpp"

#include "ctrabs/print.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ctrabs::chc {

using namespace ctrabs::logic;
using pipe::CounterSystem;
using pipe::Disjunct;

namespace {

// identifier mangling: plain name, primed name + "_p"; the scheme is
// injective over distinct symbols unless the user already took the _p name
std::string mangle(const Sym& s, int step = -1) {
  std::string n = s.name;
  if (s.primed) n += "_p";
  if (step >= 0) n += "_s" + std::to_string(step);
  return n;
}

bool valid_smt_ident(const std::string& n) {
  if (n.empty() || !std::isalpha((unsigned char)n[0])) return false;
  for (char c : n)
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  return true;
}

void smt_num(const Int& v, std::ostream& os) {
  if (v < 0)
    os << "(- " << Int(-v).str() << ")";
  else
    os << v.str();
}

void smt_linear(const Linear& lin, int step, std::ostream& os) {
  size_t terms = lin.c.size() + (lin.k != 0 ? 1 : 0);
  if (terms == 0) {
    os << "0";
    return;
  }
  if (terms > 1) os << "(+ ";
  bool first = true;
  for (const auto& [s, c] : lin.c) {
    if (!first) os << " ";
    first = false;
    if (c == 1) {
      os << mangle(s, step);
    } else {
      os << "(* ";
      smt_num(c, os);
      os << " " << mangle(s, step) << ")";
    }
  }
  if (lin.k != 0) {
    if (!first) os << " ";
    smt_num(lin.k, os);
  }
  if (terms > 1) os << ")";
}

void smt_lincon(const LinCon& c, int step, std::ostream& os) {
  switch (c.k) {
    case LinCon::K::Eq:
      os << "(= ";
      smt_linear(c.lin, step, os);
      os << " 0)";
      return;
    case LinCon::K::Le:
      os << "(<= ";
      smt_linear(c.lin, step, os);
      os << " 0)";
      return;
    case LinCon::K::Lt:
      os << "(< ";
      smt_linear(c.lin, step, os);
      os << " 0)";
      return;
    case LinCon::K::Cong:
      os << "(= (mod ";
      smt_linear(c.lin, step, os);
      os << " " << c.mod.str() << ") 0)";
      return;
    case LinCon::K::NCong:
      os << "(not (= (mod ";
      smt_linear(c.lin, step, os);
      os << " " << c.mod.str() << ") 0))";
      return;
  }
}

void smt_term(const Term& t, int step, std::ostream& os) {
  switch (t->k) {
    case TermNode::K::Num: smt_num(t->num, os); return;
    case TermNode::K::SymRef: {
      // parameters and derived locals carry no step suffix
      bool stepless = t->sym.kind == SymKind::Param || t->sym.kind == SymKind::Derived;
      os << mangle(t->sym, stepless ? -1 : step);
      return;
    }
    case TermNode::K::Add:
      os << "(+ ";
      smt_term(t->a, step, os);
      os << " ";
      smt_term(t->b, step, os);
      os << ")";
      return;
    case TermNode::K::Sub:
      os << "(- ";
      smt_term(t->a, step, os);
      os << " ";
      smt_term(t->b, step, os);
      os << ")";
      return;
    case TermNode::K::Mul:
      os << "(* ";
      smt_num(t->num, os);
      os << " ";
      smt_term(t->a, step, os);
      os << ")";
      return;
    case TermNode::K::FloorDiv:
      os << "(div ";
      smt_term(t->a, step, os);
      os << " " << t->num.str() << ")";
      return;
    default: fail(ErrKind::Internal, "smt_term: array read or cardinality in safety formula");
  }
}

void smt_formula(const Formula& f, int step, std::ostream& os) {
  switch (f->k) {
    case FNode::K::True: os << "true"; return;
    case FNode::K::False: os << "false"; return;
    case FNode::K::Atom: {
      const Atom& a = f->atom;
      if (a.k == Atom::K::Cong) {
        os << "(= (mod (- ";
        smt_term(a.lhs, step, os);
        os << " ";
        smt_term(a.rhs, step, os);
        os << ") " << a.mod.str() << ") 0)";
        return;
      }
      if (a.k != Atom::K::Cmp)
        fail(ErrKind::Internal, "smt_formula: data atom in safety formula");
      os << "(" << (a.op == CmpOp::Eq ? "=" : a.op == CmpOp::Lt ? "<" : "<=") << " ";
      smt_term(a.lhs, step, os);
      os << " ";
      smt_term(a.rhs, step, os);
      os << ")";
      return;
    }
    case FNode::K::Not:
      os << "(not ";
      smt_formula(f->kids[0], step, os);
      os << ")";
      return;
    case FNode::K::And:
    case FNode::K::Or: {
      if (f->kids.empty()) {
        os << (f->k == FNode::K::And ? "true" : "false");
        return;
      }
      os << (f->k == FNode::K::And ? "(and" : "(or");
      for (const auto& kid : f->kids) {
        os << " ";
        smt_formula(kid, step, os);
      }
      os << ")";
      return;
    }
    default: fail(ErrKind::Internal, "smt_formula: quantifier in safety formula");
  }
}

// disjunction of conjunctions as a body conjunct ("true" for one empty disjunct)
void smt_disjunction(const std::vector<Disjunct>& ds, int step, std::ostream& os) {
  if (ds.size() == 1 && ds[0].cons.cons.empty()) {
    os << "true";
    return;
  }
  if (ds.empty()) {
    os << "false";
    return;
  }
  if (ds.size() > 1) os << "(or ";
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i) os << " ";
    const auto& cons = ds[i].cons.cons;
    if (cons.empty()) {
      os << "true";
      continue;
    }
    if (cons.size() > 1) os << "(and ";
    for (size_t k = 0; k < cons.size(); ++k) {
      if (k) os << " ";
      smt_lincon(cons[k], step, os);
    }
    if (cons.size() > 1) os << ")";
  }
  if (ds.size() > 1) os << ")";
}

std::set<Sym> disjunct_locals(const Disjunct& d) {
  std::set<Sym> out;
  for (const auto& con : d.cons.cons)
    for (const auto& [s, c] : con.lin.c)
      if (s.kind == SymKind::Derived) out.insert(s);
  return out;
}

} // namespace

HornProblem emit_horn(const CounterSystem& cs, const Formula& bad, const Formula& strengthen,
                      const std::string& headerComment) {
  HornProblem hp;
  for (const auto& s : cs.params) hp.argumentOrder.push_back(s);
  for (const auto& s : cs.intvars) hp.argumentOrder.push_back(s);
  for (const auto& s : cs.counters) hp.argumentOrder.push_back(s);

  // defensive: documented mangling must stay injective
  std::set<std::string> seen;
  for (const auto& s : hp.argumentOrder) {
    for (bool primed : {false, true}) {
      Sym v = s;
      v.primed = primed;
      std::string m = mangle(v);
      if (!valid_smt_ident(m)) fail(ErrKind::SymbolClash, "unmappable identifier " + m);
      if (!seen.insert(m).second) fail(ErrKind::SymbolClash, "identifier clash on " + m);
    }
  }
  for (const auto& d : cs.locals) {
    if (!seen.insert(mangle(d.sym)).second)
      fail(ErrKind::SymbolClash, "identifier clash on " + mangle(d.sym));
  }

  std::ostringstream os;
  if (!headerComment.empty()) {
    std::istringstream lines(headerComment);
    std::string line;
    while (std::getline(lines, line)) os << "; " << line << "\n";
  }
  os << "(set-logic HORN)\n";
  os << "(declare-fun " << hp.predicateName << " (";
  for (size_t i = 0; i < hp.argumentOrder.size(); ++i) os << (i ? " Int" : "Int");
  os << ") Bool)\n";

  auto declare_vars = [&](std::ostream& o, bool primedToo, const std::set<Sym>& locals) {
    o << "(";
    bool first = true;
    auto put = [&](const Sym& s) {
      if (!first) o << " ";
      first = false;
      o << "(" << mangle(s) << " Int)";
    };
    for (const auto& s : hp.argumentOrder) put(s);
    if (primedToo) {
      for (const auto& s : cs.intvars) {
        Sym v = s;
        v.primed = true;
        put(v);
      }
      for (const auto& s : cs.counters) {
        Sym v = s;
        v.primed = true;
        put(v);
      }
    }
    for (const auto& s : locals) put(s);
    o << ")";
  };

  auto inv_app = [&](bool primed) {
    std::ostringstream o;
    o << "(" << hp.predicateName;
    for (const auto& s : cs.params) o << " " << mangle(s); // params are rigid
    for (const auto& s : cs.intvars) {
      Sym v = s;
      v.primed = primed;
      o << " " << mangle(v);
    }
    for (const auto& s : cs.counters) {
      Sym v = s;
      v.primed = primed;
      o << " " << mangle(v);
    }
    o << ")";
    return o.str();
  };

  // init rules: (Phi0 and iota0_d [and strengthen]) => inv
  for (const auto& d : cs.iota0) {
    os << "(assert (forall ";
    declare_vars(os, false, disjunct_locals(d));
    os << " (=> (and ";
    smt_disjunction(cs.phi0, -1, os);
    for (const auto& con : d.cons.cons) {
      os << " ";
      smt_lincon(con, -1, os);
    }
    if (strengthen) {
      os << " ";
      smt_formula(strengthen, -1, os);
    }
    os << ") " << inv_app(false) << ")))\n";
  }

  // step rules: (inv and Phi0 and tau0_d) => inv'
  for (const auto& d : cs.tau0) {
    os << "(assert (forall ";
    declare_vars(os, true, disjunct_locals(d));
    os << " (=> (and " << inv_app(false) << " ";
    smt_disjunction(cs.phi0, -1, os);
    for (const auto& con : d.cons.cons) {
      os << " ";
      smt_lincon(con, -1, os);
    }
    os << ") " << inv_app(true) << ")))\n";
  }

  // query rule: (inv and bad) => false
  os << "(assert (forall ";
  declare_vars(os, false, {});
  os << " (=> (and " << inv_app(false) << " ";
  smt_formula(bad, -1, os);
  os << ") false)))\n";
  os << "(check-sat)\n";
  hp.text = os.str();
  return hp;
}

std::string emit_bounded_smt(const CounterSystem& cs, const Formula& bad, int k,
                             const Formula& strengthen) {
  if (k < 0) fail(ErrKind::Config, "unrolling depth must be nonnegative");
  std::ostringstream os;
  os << "; bounded unrolling, depth " << k << "\n(set-logic ALL)\n";
  for (const auto& s : cs.params) os << "(declare-const " << mangle(s) << " Int)\n";
  auto stepVars = [&](int step) {
    std::vector<Sym> out;
    for (const auto& s : cs.intvars) out.push_back(s);
    for (const auto& s : cs.counters) out.push_back(s);
    (void)step;
    return out;
  };
  for (int step = 0; step <= k; ++step)
    for (const auto& s : stepVars(step))
      os << "(declare-const " << mangle(s, step) << " Int)\n";

  // a disjunct at (pre, post); locals existentially bound inside
  auto disjunct_at = [&](const Disjunct& d, int pre, int post, std::ostream& o) {
    std::set<Sym> locals = disjunct_locals(d);
    if (!locals.empty()) {
      o << "(exists (";
      bool first = true;
      for (const auto& s : locals) {
        if (!first) o << " ";
        first = false;
        o << "(" << mangle(s) << " Int)";
      }
      o << ") ";
    }
    if (d.cons.cons.empty()) {
      o << "true";
    } else {
      o << "(and";
      for (const auto& con : d.cons.cons) {
        o << " ";
        // primed symbols land on the post step, unprimed on pre
        std::string opStr = con.k == LinCon::K::Eq    ? "="
                            : con.k == LinCon::K::Le  ? "<="
                            : con.k == LinCon::K::Lt  ? "<"
                                                      : "";
        auto emitLin = [&](std::ostream& oo) {
          size_t terms = con.lin.c.size() + (con.lin.k != 0 ? 1 : 0);
          if (terms == 0) {
            oo << "0";
            return;
          }
          if (terms > 1) oo << "(+ ";
          bool first2 = true;
          for (const auto& [s, c] : con.lin.c) {
            if (!first2) oo << " ";
            first2 = false;
            std::string name;
            if (s.kind == SymKind::Param || s.kind == SymKind::Derived) {
              name = mangle(s);
            } else {
              Sym base = s;
              base.primed = false;
              name = mangle(base, s.primed ? post : pre);
            }
            if (c == 1) {
              oo << name;
            } else {
              oo << "(* ";
              smt_num(c, oo);
              oo << " " << name << ")";
            }
          }
          if (con.lin.k != 0) {
            if (!first2) oo << " ";
            smt_num(con.lin.k, oo);
          }
          if (terms > 1) oo << ")";
        };
        if (con.k == LinCon::K::Cong || con.k == LinCon::K::NCong) {
          if (con.k == LinCon::K::NCong) o << "(not ";
          o << "(= (mod ";
          emitLin(o);
          o << " " << con.mod.str() << ") 0)";
          if (con.k == LinCon::K::NCong) o << ")";
        } else {
          o << "(" << opStr << " ";
          emitLin(o);
          o << " 0)";
        }
      }
      o << ")";
    }
    if (!locals.empty()) o << ")";
  };

  auto disjunction_at = [&](const std::vector<Disjunct>& ds, int pre, int post, std::ostream& o) {
    if (ds.empty()) {
      o << "false";
      return;
    }
    if (ds.size() > 1) o << "(or ";
    for (size_t i = 0; i < ds.size(); ++i) {
      if (i) o << " ";
      disjunct_at(ds[i], pre, post, o);
    }
    if (ds.size() > 1) o << ")";
  };

  os << "(assert ";
  disjunction_at(cs.phi0, 0, 0, os);
  os << ")\n(assert ";
  disjunction_at(cs.iota0, 0, 0, os);
  os << ")\n";
  if (strengthen) {
    os << "(assert ";
    smt_formula(strengthen, 0, os);
    os << ")\n";
  }
  for (int step = 0; step < k; ++step) {
    os << "(assert ";
    disjunction_at(cs.tau0, step, step + 1, os);
    os << ")\n(assert ";
    disjunction_at(cs.phi0, step + 1, step + 1, os);
    os << ")\n";
  }
  os << "(assert ";
  smt_formula(bad, k, os);
  os << ")\n(check-sat)\n";
  return os.str();
}

} // namespace ctrabs::chc
