#include "ctrabs/print.hpp"

#include "ctrabs/linear.hpp"

#include <sstream>

namespace ctrabs::logic {

std::string print_sym(const Sym& s) { return s.primed ? s.name + "'" : s.name; }

static std::string array_name(int idx, bool primed, const Vocab* v) {
  std::string n = v ? v->arrays.at(idx).name : "@" + std::to_string(idx);
  return primed ? n + "'" : n;
}

// precedence: additive 1, multiplicative 2, leaf 3
static void print_term_prec(const Term& t, const Vocab* v, int parentPrec, std::ostream& os);

static void print_binary(const Term& a, const char* op, const Term& b, int myPrec,
                         int parentPrec, const Vocab* v, std::ostream& os) {
  bool paren = myPrec < parentPrec;
  if (paren) os << "(";
  print_term_prec(a, v, myPrec, os);
  os << " " << op << " ";
  print_term_prec(b, v, myPrec + 1, os);
  if (paren) os << ")";
}

static void print_term_prec(const Term& t, const Vocab* v, int parentPrec, std::ostream& os) {
  switch (t->k) {
    case TermNode::K::Num:
      if (t->num < 0 && parentPrec > 1) {
        os << "(" << t->num.str() << ")";
      } else {
        os << t->num.str();
      }
      return;
    case TermNode::K::SymRef: os << print_sym(t->sym); return;
    case TermNode::K::Read:
      os << array_name(t->array, t->primed, v) << "(" << t->var << ")";
      return;
    case TermNode::K::Card:
      os << "#{" << t->var << " | " << print_formula(t->body, v) << "}";
      return;
    case TermNode::K::Add: print_binary(t->a, "+", t->b, 1, parentPrec, v, os); return;
    case TermNode::K::Sub: print_binary(t->a, "-", t->b, 1, parentPrec, v, os); return;
    case TermNode::K::Mul: {
      bool paren = 2 < parentPrec;
      if (paren) os << "(";
      os << t->num.str() << "*";
      print_term_prec(t->a, v, 3, os);
      if (paren) os << ")";
      return;
    }
    case TermNode::K::FloorDiv: {
      bool paren = 2 < parentPrec;
      if (paren) os << "(";
      print_term_prec(t->a, v, 3, os);
      os << " div " << t->num.str();
      if (paren) os << ")";
      return;
    }
  }
}

std::string print_term(const Term& t, const Vocab* v) {
  std::ostringstream os;
  print_term_prec(t, v, 0, os);
  return os.str();
}

std::string print_atom(const Atom& a, const Vocab* v) {
  std::ostringstream os;
  switch (a.k) {
    case Atom::K::Cmp:
      os << print_term(a.lhs, v) << (a.op == CmpOp::Eq ? " = " : a.op == CmpOp::Lt ? " < " : " <= ")
         << print_term(a.rhs, v);
      break;
    case Atom::K::Cong:
      os << print_term(a.lhs, v) << " = " << print_term(a.rhs, v) << " mod " << a.mod.str();
      break;
    case Atom::K::DataEqConst:
      os << array_name(a.arrA, a.primedA, v) << "(" << a.var << ") = "
         << (v ? v->array_sort_value(a.arrA, a.valIdx) : "%" + std::to_string(a.valIdx));
      break;
    case Atom::K::DataEqArr:
      os << array_name(a.arrA, a.primedA, v) << "(" << a.var << ") = "
         << array_name(a.arrB, a.primedB, v) << "(" << a.var << ")";
      break;
  }
  return os.str();
}

// precedence: or 1, and 2, unary 3
static void print_formula_prec(const Formula& f, const Vocab* v, int parentPrec,
                               std::ostream& os) {
  switch (f->k) {
    case FNode::K::True: os << "true"; return;
    case FNode::K::False: os << "false"; return;
    case FNode::K::Atom: os << print_atom(f->atom, v); return;
    case FNode::K::Not:
      os << "!";
      print_formula_prec(f->kids[0], v, 3, os);
      return;
    case FNode::K::And:
    case FNode::K::Or: {
      const char* op = f->k == FNode::K::And ? " & " : " | ";
      int myPrec = f->k == FNode::K::And ? 2 : 1;
      if (f->kids.empty()) {
        os << (f->k == FNode::K::And ? "true" : "false");
        return;
      }
      bool paren = myPrec < parentPrec;
      if (paren) os << "(";
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << op;
        print_formula_prec(f->kids[i], v, myPrec + 1, os);
      }
      if (paren) os << ")";
      return;
    }
    case FNode::K::ForallProc:
      os << "forall " << f->var << " . ";
      print_formula_prec(f->kids[0], v, 0, os);
      return;
    case FNode::K::ExistsInt:
      os << "exists " << f->var << " . ";
      print_formula_prec(f->kids[0], v, 0, os);
      return;
  }
}

std::string print_formula(const Formula& f, const Vocab* v) {
  std::ostringstream os;
  print_formula_prec(f, v, 0, os);
  return os.str();
}

std::string print_linear(const Linear& l) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : l.c) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c.str() << "*";
    os << print_sym(s);
  }
  if (l.k != 0 || first) {
    if (!first) os << " + ";
    os << l.k.str();
  }
  return os.str();
}

// lin ⋈ 0 printed with positive coefficients on each side
static void split_sides(const Linear& l, std::ostream& lhs, std::ostream& rhs) {
  bool lf = true, rf = true;
  for (const auto& [s, c] : l.c) {
    if (c > 0) {
      if (!lf) lhs << " + ";
      lf = false;
      if (c != 1) lhs << c.str() << "*";
      lhs << print_sym(s);
    } else {
      if (!rf) rhs << " + ";
      rf = false;
      if (c != -1) rhs << Int(-c).str() << "*";
      rhs << print_sym(s);
    }
  }
  if (l.k > 0 || lf) {
    if (!lf) lhs << " + ";
    lhs << (l.k > 0 ? l.k.str() : "0");
    lf = false;
  }
  if (l.k < 0 || rf) {
    if (!rf) rhs << " + ";
    rhs << (l.k < 0 ? Int(-l.k).str() : "0");
    rf = false;
  }
}

std::string print_lincon(const LinCon& c) {
  std::ostringstream lhs, rhs, os;
  switch (c.k) {
    case LinCon::K::Eq:
      split_sides(c.lin, lhs, rhs);
      os << lhs.str() << " = " << rhs.str();
      break;
    case LinCon::K::Le:
      split_sides(c.lin, lhs, rhs);
      os << lhs.str() << " <= " << rhs.str();
      break;
    case LinCon::K::Lt:
      split_sides(c.lin, lhs, rhs);
      os << lhs.str() << " < " << rhs.str();
      break;
    case LinCon::K::Cong:
      split_sides(c.lin, lhs, rhs);
      os << lhs.str() << " = " << rhs.str() << " mod " << c.mod.str();
      break;
    case LinCon::K::NCong:
      split_sides(c.lin, lhs, rhs);
      os << "!(" << lhs.str() << " = " << rhs.str() << " mod " << c.mod.str() << ")";
      break;
  }
  return os.str();
}

} // namespace ctrabs::logic
