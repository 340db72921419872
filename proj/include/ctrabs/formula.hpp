#pragma once

#include "ctrabs/vocab.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace ctrabs::logic {

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

// Integer-sorted terms. FloorDiv survives validation and is removed by
// desugar_floor_div before the pipeline runs.
struct TermNode {
  enum class K { Num, SymRef, Read, Card, Add, Sub, Mul, FloorDiv } k;
  Int num;          // Num value; Mul scalar; FloorDiv divisor
  Sym sym;          // SymRef
  int array = -1;   // Read
  bool primed = false;
  std::string var;  // Read index variable; Card bound variable
  Formula body;     // Card
  Term a, b;
};

Term t_num(Int v);
Term t_sym(Sym s);
Term t_read(int array, bool primed, std::string var);
Term t_card(std::string boundVar, Formula body);
Term t_add(Term a, Term b);
Term t_sub(Term a, Term b);
Term t_mul(Int scalar, Term a);
Term t_floordiv(Term a, Int divisor);

enum class CmpOp : uint8_t { Eq, Lt, Le };

struct Atom {
  enum class K { Cmp, Cong, DataEqConst, DataEqArr } k;
  // Cmp / Cong
  CmpOp op = CmpOp::Eq;
  Term lhs, rhs;
  Int mod; // Cong, >= 2
  // Data atoms
  int arrA = -1;
  bool primedA = false;
  std::string var;
  int valIdx = -1; // DataEqConst
  int arrB = -1;   // DataEqArr
  bool primedB = false;
};

Atom a_cmp(CmpOp op, Term l, Term r);
Atom a_cong(Term l, Term r, Int mod);
Atom a_data_const(int arr, bool primed, std::string var, int valIdx);
Atom a_data_arr(int arrA, bool primedA, int arrB, bool primedB, std::string var);

struct FNode {
  enum class K { True, False, Atom, Not, And, Or, ForallProc, ExistsInt } k;
  Atom atom;
  std::vector<Formula> kids;
  std::string var; // ForallProc / ExistsInt bound variable
};

Formula f_true();
Formula f_false();
Formula f_atom(Atom a);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> kids);
Formula f_or(std::vector<Formula> kids);
Formula f_forall(std::string var, Formula f);
Formula f_exists_int(std::string var, Formula f);

bool struct_eq(const Term& a, const Term& b);
bool struct_eq(const Formula& a, const Formula& b);
bool atom_eq(const Atom& a, const Atom& b);

// Free occurring integer symbols, array-ids (with primed flag), and whether
// any cardinality terms occur. Proc variables are never free in validated
// specs; boundProc tracks scoping during the walk.
struct FreeSymbols {
  std::set<Sym> syms;
  std::set<std::pair<int, bool>> arrays; // (arrayIdx, primed)
  bool hasCard = false;
};
FreeSymbols free_symbols(const Formula& f);
FreeSymbols free_symbols(const Term& t);

// name -> replacement for integer symbols; (array, primed) -> symbol for
// reads (reverse skolemization). Sort-correctness is the caller's business;
// reads may only be replaced by integer symbols.
struct Substitution {
  std::map<Sym, Term> syms;
  std::map<std::pair<int, bool>, Sym> reads;
};
Term substitute(const Term& t, const Substitution& s);
Formula substitute(const Formula& f, const Substitution& s);

// delta -> delta': prime every array read and every state symbol
// (IntVar/Counter/AutoCounter) in f. Params and derived locals stay.
Formula prime_state(const Formula& f);
Term prime_state(const Term& t);

// Rename the single bound Proc variable of data atoms / reads from `from` to `to`.
Formula rename_proc_var(const Formula& f, const std::string& from, const std::string& to);

} // namespace ctrabs::logic
