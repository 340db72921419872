#include "ctrabs/basics.hpp"

#include <fstream>
#include <sstream>

namespace ctrabs {

Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
Int int_lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

Int floor_div(const Int& u, const Int& d) {
  Int q = u / d, r = u % d;
  if (r != 0 && ((r < 0) != (d < 0))) q -= 1;
  return q;
}

Int pos_mod(const Int& u, const Int& d) {
  Int r = u % d;
  if (r < 0) r += (d < 0 ? -d : d);
  return r;
}

int64_t floor_div64(int64_t u, int64_t d) {
  int64_t q = u / d, r = u % d;
  if (r != 0 && ((r < 0) != (d < 0))) q -= 1;
  return q;
}

int64_t pos_mod64(int64_t u, int64_t d) {
  int64_t r = u % d;
  if (r < 0) r += (d < 0 ? -d : d);
  return r;
}

const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Syntax: return "SyntaxError";
    case ErrKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrKind::FragmentViolation: return "FragmentViolation";
    case ErrKind::UnknownSymbol: return "UnknownSymbol";
    case ErrKind::SortMismatch: return "SortMismatch";
    case ErrKind::MultipleInitCases: return "MultipleInitCases";
    case ErrKind::NonConstantDivisor: return "NonConstantDivisor";
    case ErrKind::AtomBudgetExceeded: return "AtomBudgetExceeded";
    case ErrKind::CellBudgetExceeded: return "CellBudgetExceeded";
    case ErrKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrKind::UnboundSymbol: return "UnboundSymbol";
    case ErrKind::UnboundedExistential: return "UnboundedExistential";
    case ErrKind::UnknownBenchmark: return "UnknownBenchmark";
    case ErrKind::SymbolClash: return "SymbolClash";
    case ErrKind::SolverNotFound: return "SolverNotFound";
    case ErrKind::SolverTimeout: return "SolverTimeout";
    case ErrKind::UnparseableVerdict: return "UnparseableVerdict";
    case ErrKind::Config: return "ConfigError";
    case ErrKind::Io: return "IoError";
    case ErrKind::Internal: return "InternalError";
  }
  return "Error";
}

static std::string format_msg(ErrKind k, const std::string& msg, int line, int col) {
  std::ostringstream os;
  os << err_kind_name(k);
  if (line > 0) os << " at " << line << ":" << col;
  os << ": " << msg;
  return os.str();
}

Error::Error(ErrKind k, const std::string& msg, int line_, int col_)
    : std::runtime_error(format_msg(k, msg, line_, col_)), kind(k), line(line_), col(col_) {}

void fail(ErrKind k, const std::string& msg, int line, int col) { throw Error(k, msg, line, col); }

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrKind::Io, "cannot write " + path);
  out << content;
}

} // namespace ctrabs
