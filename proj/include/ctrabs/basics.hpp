#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctrabs {

// Arbitrary precision everywhere the QE machinery multiplies by lcm's;
// narrow to int64 only in the compiled evaluators, with range checks.
using Int = boost::multiprecision::cpp_int;

Int int_gcd(const Int& a, const Int& b);
Int int_lcm(const Int& a, const Int& b);
// floor division / euclidean remainder (d > 0)
Int floor_div(const Int& u, const Int& d);
Int pos_mod(const Int& u, const Int& d);
int64_t floor_div64(int64_t u, int64_t d);
int64_t pos_mod64(int64_t u, int64_t d);

enum class ErrKind {
  Syntax,
  DuplicateDeclaration,
  FragmentViolation,
  UnknownSymbol,
  SortMismatch,
  MultipleInitCases,
  NonConstantDivisor,
  AtomBudgetExceeded,
  CellBudgetExceeded,
  StateBudgetExceeded,
  UnboundSymbol,
  UnboundedExistential,
  UnknownBenchmark,
  SymbolClash,
  SolverNotFound,
  SolverTimeout,
  UnparseableVerdict,
  Config,
  Io,
  Internal,
};

const char* err_kind_name(ErrKind k);

struct Error : std::runtime_error {
  ErrKind kind;
  int line = 0, col = 0; // 0 = no position
  Error(ErrKind k, const std::string& msg, int line = 0, int col = 0);
};

[[noreturn]] void fail(ErrKind k, const std::string& msg, int line = 0, int col = 0);

// FNV-1a, used for the spec hash recorded in emitted files.
uint64_t fnv1a(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace ctrabs
