#pragma once

#include "ctrabs/basics.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ctrabs::logic {

// Integer-valued symbol. Declared symbols (Param/IntVar/Counter) live in the
// Vocab; the pipeline mints AutoCounter/Derived/Cell/Skolem/Opaque symbols.
enum class SymKind : uint8_t {
  Param = 0,
  IntVar = 1,
  Counter = 2,
  AutoCounter = 3,
  Derived = 4,
  Cell = 5,
  Skolem = 6,
  Opaque = 7, // temporary stand-in for a cardinality term during QE
};

struct Sym {
  SymKind kind = SymKind::Param;
  std::string name;
  bool primed = false;

  friend bool operator==(const Sym& a, const Sym& b) {
    return a.kind == b.kind && a.primed == b.primed && a.name == b.name;
  }
  friend bool operator!=(const Sym& a, const Sym& b) { return !(a == b); }
  friend bool operator<(const Sym& a, const Sym& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.name != b.name) return a.name < b.name;
    return a.primed < b.primed;
  }
};

enum class ArrayKind : uint8_t { Enumerated, Arithmetic };

struct SortDecl {
  std::string name;
  std::vector<std::string> values; // value index = position
};

struct ArrayDecl {
  std::string name;
  ArrayKind kind;
  int sortIdx = -1; // for Enumerated
};

struct IntVarDecl {
  std::string name;
  bool boolSwitch = false; // declared `x : bool`; constrained to {0,1} via Phi
};

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct CounterDecl {
  std::string name;
  std::string boundVar;
  Formula body; // Data-formula over boundVar, unprimed arrays only
};

// Declared signature + state variables. Immutable once validated.
struct Vocab {
  std::vector<std::string> params; // includes N
  std::vector<SortDecl> sorts;
  std::vector<IntVarDecl> intvars;
  std::vector<ArrayDecl> arrays;
  std::vector<CounterDecl> counters;

  int sort_index(const std::string& n) const;
  int array_index(const std::string& n) const;
  int counter_index(const std::string& n) const;
  int param_index(const std::string& n) const;
  int intvar_index(const std::string& n) const;
  int value_index(int sortIdx, const std::string& v) const;
  bool name_taken(const std::string& n) const;
  const std::string& array_sort_value(int arrayIdx, int valIdx) const;
};

using VocabPtr = std::shared_ptr<const Vocab>;

} // namespace ctrabs::logic
