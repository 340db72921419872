#pragma once

#include "ctrabs/parser.hpp"
#include "ctrabs/qe.hpp"

#include <cstdlib>
#include <random>
#include <string>

namespace th {

inline std::string src_dir() {
  if (const char* env = std::getenv("CTRABS_SRC")) return env;
  return ".";
}

inline std::string bench_path(const std::string& rel) {
  return src_dir() + "/benchmarks/" + rel;
}

inline ctrabs::front::SystemSpec load_spec(const std::string& path) {
  return ctrabs::front::validate(ctrabs::front::parse_spec(ctrabs::read_file(path)));
}

inline ctrabs::front::SystemSpec ot_spec() { return load_spec(bench_path("ot/spec.cf")); }

// brute-force oracle for quantifier elimination: exists x in [-B, B] with the
// other symbols fixed. B is a complete witness bound: beyond every boundary
// the constraint truth values are constant in x except for periodicity, which
// lcm(moduli) covers.
inline ctrabs::Int witness_bound(const ctrabs::qe::ConSet& c, const ctrabs::logic::Sym& x,
                                 const std::map<ctrabs::logic::Sym, ctrabs::Int>& outer) {
  using ctrabs::Int;
  Int maxBoundary = 0, lcm = 1;
  for (const auto& con : c.cons) {
    Int ax = con.lin.coeff(x);
    if (ax == 0) continue;
    if (con.k == ctrabs::logic::LinCon::K::Cong || con.k == ctrabs::logic::LinCon::K::NCong) {
      lcm = ctrabs::int_lcm(lcm, con.mod);
      continue;
    }
    Int rest = con.lin.k;
    for (const auto& [s, cf] : con.lin.c) {
      if (s == x) continue;
      Int v = outer.count(s) ? outer.at(s) : Int(0);
      rest += cf * v;
    }
    Int bound = (abs(rest) / abs(ax)) + 1;
    if (bound > maxBoundary) maxBoundary = bound;
  }
  return maxBoundary + lcm + 1;
}

inline bool brute_exists(const ctrabs::qe::ConSet& c, const ctrabs::logic::Sym& x,
                         std::map<ctrabs::logic::Sym, ctrabs::Int> env) {
  ctrabs::Int B = witness_bound(c, x, env);
  for (ctrabs::Int v = -B; v <= B; ++v) {
    env[x] = v;
    if (ctrabs::qe::eval_conset(c, env)) return true;
  }
  return false;
}

} // namespace th
