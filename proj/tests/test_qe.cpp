#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctrabs/print.hpp"
#include "ctrabs/qe.hpp"

#include "helpers.hpp"

#include <random>

using namespace ctrabs;
using namespace ctrabs::logic;
using namespace ctrabs::qe;

namespace {

Sym sx{SymKind::IntVar, "x", false};
Sym sy{SymKind::IntVar, "y", false};
Sym sz{SymKind::IntVar, "z", false};

LinCon con(LinCon::K k, std::vector<std::pair<Sym, int>> coeffs, int c, int mod = 0) {
  LinCon r;
  r.k = k;
  for (auto& [s, v] : coeffs) r.lin.add_coeff(s, v);
  r.lin.k = c;
  r.mod = mod;
  return r;
}

struct RandomInstance {
  ConSet c;
  std::vector<Sym> freeSyms; // without x
};

struct Gen {
  std::mt19937 rng{987654321};
  int pick(int n) { return (int)(rng() % (unsigned)n); }

  RandomInstance instance() {
    RandomInstance ri;
    std::vector<Sym> pool = {sx, sy, sz};
    int nsyms = 1 + pick(3);
    std::set<Sym> used;
    int ncons = 1 + pick(5);
    for (int i = 0; i < ncons; ++i) {
      LinCon lc;
      int kind = pick(10);
      if (kind < 2)
        lc.k = LinCon::K::Eq;
      else if (kind < 6)
        lc.k = LinCon::K::Le;
      else if (kind < 8)
        lc.k = LinCon::K::Lt;
      else {
        lc.k = kind == 8 ? LinCon::K::Cong : LinCon::K::NCong;
        lc.mod = 2 + pick(2);
      }
      int terms = 1 + pick(nsyms);
      for (int t = 0; t < terms; ++t) {
        const Sym& s = pool[pick(nsyms)];
        int coeff = pick(7) - 3;
        if (coeff == 0) coeff = 1;
        lc.lin.add_coeff(s, coeff);
        used.insert(s);
      }
      lc.lin.k = pick(11) - 5;
      if (lc.lin.c.empty()) continue;
      ri.c.cons.push_back(std::move(lc));
    }
    // make sure x occurs
    if (!ri.c.mentions(sx)) {
      LinCon lc;
      lc.k = LinCon::K::Le;
      lc.lin.add_coeff(sx, 1 + pick(3));
      lc.lin.add_coeff(sy, pick(5) - 2);
      lc.lin.k = pick(7) - 3;
      ri.c.cons.push_back(std::move(lc));
      used.insert(sx);
      used.insert(sy);
    }
    used.erase(sx);
    ri.freeSyms.assign(used.begin(), used.end());
    return ri;
  }
};

// compare an elimination result against the brute-force oracle over the
// remaining symbols in [-20, 20]
void check_against_oracle(const RandomInstance& ri, const ConSets& result) {
  std::vector<int64_t> vals(ri.freeSyms.size(), -20);
  for (;;) {
    std::map<Sym, Int> env;
    for (size_t i = 0; i < ri.freeSyms.size(); ++i) env[ri.freeSyms[i]] = vals[i];
    bool expect = th::brute_exists(ri.c, sx, env);
    bool got = eval_consets(result, env);
    if (expect != got) {
      std::string dump;
      for (const auto& cc : ri.c.cons) dump += print_lincon(cc) + "; ";
      dump += " || result: ";
      for (const auto& cs : result.sets) {
        dump += "[";
        for (const auto& cc : cs.cons) dump += print_lincon(cc) + "; ";
        dump += "] ";
      }
      for (size_t i = 0; i < ri.freeSyms.size(); ++i)
        dump += " " + ri.freeSyms[i].name + "=" + std::to_string(vals[i]);
      REQUIRE_MESSAGE(expect == got, dump);
    }
    size_t d = vals.size();
    bool done = true;
    while (d-- > 0) {
      if (++vals[d] <= 20) {
        done = false;
        break;
      }
      vals[d] = -20;
    }
    if (done || vals.empty()) break;
  }
}

} // namespace

TEST_CASE("try_substitution: unit equality substitutes the variable out") {
  // {x = z00 + z10, x >= 0}  ->  {z00 + z10 >= 0}
  Sym z00{SymKind::Counter, "z00", false}, z10{SymKind::Counter, "z10", false};
  ConSet c;
  c.cons.push_back(con(LinCon::K::Eq, {{sx, 1}, {z00, -1}, {z10, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Le, {{sx, -1}}, 0));
  auto r = try_substitution(sx, c);
  REQUIRE(r.has_value());
  REQUIRE(r->cons.size() == 1);
  CHECK(print_lincon(r->cons[0]) == "0 <= z00 + z10");
}

TEST_CASE("try_substitution: non-unit coefficient declines") {
  ConSet c;
  c.cons.push_back(con(LinCon::K::Eq, {{sx, 2}, {sy, -1}}, 0));
  CHECK_FALSE(try_substitution(sx, c).has_value());
}

TEST_CASE("try_substitution: zero-equality pattern from iota0") {
  // {z01 = 0, N = z00 + z01 + zb0}: eliminating z01 leaves N = z00 + zb0
  Sym z01{SymKind::Counter, "z01", false}, z00{SymKind::Counter, "z00", false},
      zb0{SymKind::Counter, "zb0", false}, n{SymKind::Param, "N", false};
  ConSet c;
  c.cons.push_back(con(LinCon::K::Eq, {{z01, 1}}, 0));
  c.cons.push_back(con(LinCon::K::Eq, {{n, 1}, {z00, -1}, {z01, -1}, {zb0, -1}}, 0));
  auto r = try_substitution(z01, c);
  REQUIRE(r.has_value());
  REQUIRE(r->cons.size() == 1);
  CHECK(print_lincon(r->cons[0]) == "N = z00 + zb0");
}

TEST_CASE("cooper: integer gap") {
  // exists x (y < x and x < z)  <=>  z - y >= 2
  ConSet c;
  c.cons.push_back(con(LinCon::K::Lt, {{sy, 1}, {sx, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Lt, {{sx, 1}, {sz, -1}}, 0));
  ConSets r = cooper(sx, c);
  for (int64_t y = -10; y <= 10; ++y)
    for (int64_t z = -10; z <= 10; ++z) {
      std::map<Sym, Int> env{{sy, y}, {sz, z}};
      CHECK(eval_consets(r, env) == (z - y >= 2));
    }
}

TEST_CASE("cooper: parity") {
  // exists x (2x = y)  <=>  y ≡ 0 (mod 2)
  ConSet c;
  c.cons.push_back(con(LinCon::K::Eq, {{sx, 2}, {sy, -1}}, 0));
  ConSets r = cooper(sx, c);
  REQUIRE(r.sets.size() == 1);
  REQUIRE(r.sets[0].cons.size() == 1);
  CHECK(r.sets[0].cons[0].k == LinCon::K::Cong);
  CHECK(r.sets[0].cons[0].mod == 2);
  for (int64_t y = -10; y <= 10; ++y) {
    std::map<Sym, Int> env{{sy, y}};
    CHECK(eval_consets(r, env) == (y % 2 == 0));
  }
}

TEST_CASE("fm_real: interval shadow and documented precision loss") {
  // forcing FM on {2x <= z, 2x >= y} -> y <= z
  ConSet c;
  c.cons.push_back(con(LinCon::K::Le, {{sx, 2}, {sz, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Le, {{sx, -2}, {sy, 1}}, 0));
  ConSet r = fm_real(sx, c);
  REQUIRE(r.cons.size() == 1);
  CHECK(print_lincon(r.cons[0]) == "y <= z");
  // exists x (2x = y) relaxes to true (parity lost)
  ConSet p;
  p.cons.push_back(con(LinCon::K::Eq, {{sx, 2}, {sy, -1}}, 0));
  ConSet rp = fm_real(sx, p);
  CHECK(rp.cons.empty());
}

TEST_CASE("eliminate_int_var: dispatch and relax flag") {
  ConSet sub;
  sub.cons.push_back(con(LinCon::K::Eq, {{sx, 1}, {sy, -1}}, 0));
  sub.cons.push_back(con(LinCon::K::Le, {{sx, -1}}, 0));
  auto r1 = eliminate_int_var(sx, sub, Policy::Exact);
  CHECK(r1.exact);
  REQUIRE(r1.sets.sets.size() == 1);
  CHECK(print_lincon(r1.sets.sets[0].cons[0]) == "0 <= y");

  ConSet parity;
  parity.cons.push_back(con(LinCon::K::Eq, {{sx, 2}, {sy, -1}}, 0));
  auto r2 = eliminate_int_var(sx, parity, Policy::Exact);
  CHECK(r2.exact);
  CHECK(r2.sets.sets[0].cons[0].k == LinCon::K::Cong);

  auto r3 = eliminate_int_var(sx, parity, Policy::RelaxOnBudget, 0);
  CHECK_FALSE(r3.exact);
  REQUIRE(r3.sets.sets.size() == 1);
  CHECK(r3.sets.sets[0].cons.empty()); // TrueF, parity lost
}

TEST_CASE("interval and ground unsat provers") {
  ConSet c;
  c.cons.push_back(con(LinCon::K::Le, {{sx, 1}}, -3));  // x <= 3... x - 3 <= 0
  c.cons.push_back(con(LinCon::K::Le, {{sx, -1}}, 5));  // x >= 5
  CHECK(interval_unsat(c));
  ConSet sat;
  sat.cons.push_back(con(LinCon::K::Le, {{sx, 1}, {sy, -2}}, 0));
  CHECK_FALSE(interval_unsat(sat));
  CHECK_FALSE(fm_ground_unsat(sat));
  ConSet fmCase; // x + y <= -1, -x <= 0, -y <= 0 : unsat over the reals
  fmCase.cons.push_back(con(LinCon::K::Le, {{sx, 1}, {sy, 1}}, 1));
  fmCase.cons.push_back(con(LinCon::K::Le, {{sx, -1}}, 0));
  fmCase.cons.push_back(con(LinCon::K::Le, {{sy, -1}}, 0));
  CHECK(fm_ground_unsat(fmCase));
}

TEST_CASE("zero-forced elimination keeps derived equalities") {
  // partition vs epsilon equation: N = c0 + c1, N = c1, with c0,c1 >= 0
  // forces c0 = 0; eliminating cells leaves N = c1-free constraints over z
  Sym n{SymKind::Param, "N", false};
  Sym c0{SymKind::Cell, "c0", false}, c1{SymKind::Cell, "c1", false};
  Sym z{SymKind::Counter, "z", false};
  ConSets in;
  ConSet c;
  c.cons.push_back(con(LinCon::K::Eq, {{n, 1}, {c0, -1}, {c1, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Eq, {{n, 1}, {c1, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Le, {{c0, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Le, {{c1, -1}}, 0));
  c.cons.push_back(con(LinCon::K::Eq, {{z, 1}, {c0, -1}}, 0)); // z = c0
  in.sets.push_back(c);
  ElimStats stats;
  auto r = eliminate_all(
      in, [](const Sym& s) { return s.kind == SymKind::Cell; }, Policy::Exact, 5000, &stats);
  REQUIRE(r.sets.sets.size() == 1);
  std::set<std::string> atoms;
  for (const auto& cc : r.sets.sets[0].cons) atoms.insert(print_lincon(cc));
  CHECK(atoms.count("z = 0"));    // z = c0 = 0
  CHECK(atoms.count("0 <= N"));   // N = c1 >= 0
  CHECK(stats.zeroForced > 0);
}

TEST_CASE("property: exact elimination agrees with the brute-force oracle") {
  Gen gen;
  int instances = 0;
  while (instances < 250) {
    RandomInstance ri = gen.instance();
    {
      ConSet copy = ri.c;
      if (!simplify_conset(copy)) {
        // still a legal instance: unsat everywhere; cooper must agree
      }
    }
    auto r = eliminate_int_var(sx, ri.c, Policy::Exact);
    REQUIRE(r.exact);
    check_against_oracle(ri, r.sets);
    instances++;
  }
}

TEST_CASE("property: fm_real is implied by cooper") {
  Gen gen;
  for (int i = 0; i < 250; ++i) {
    RandomInstance ri = gen.instance();
    ConSets exact = cooper(sx, ri.c);
    ConSet relaxed = fm_real(sx, ri.c);
    std::vector<int64_t> vals(ri.freeSyms.size(), -20);
    for (;;) {
      std::map<Sym, Int> env;
      for (size_t k = 0; k < ri.freeSyms.size(); ++k) env[ri.freeSyms[k]] = vals[k];
      if (eval_consets(exact, env)) {
        ConSets one;
        one.sets.push_back(relaxed);
        CHECK_MESSAGE(eval_consets(one, env), "cooper point escapes fm_real");
      }
      size_t d = vals.size();
      bool done = true;
      while (d-- > 0) {
        if (++vals[d] <= 20) {
          done = false;
          break;
        }
        vals[d] = -20;
      }
      if (done || vals.empty()) break;
    }
  }
}

TEST_CASE("property: elimination order independence") {
  Gen gen;
  for (int i = 0; i < 120; ++i) {
    RandomInstance ri = gen.instance();
    if (!ri.c.mentions(sy)) continue;
    // eliminate x then y vs y then x; compare on the z-grid
    auto elimTwo = [&](const Sym& a, const Sym& b) {
      ConSets mid;
      auto ra = eliminate_int_var(a, ri.c, Policy::Exact);
      for (const auto& cs : ra.sets.sets) {
        if (!cs.mentions(b)) {
          mid.sets.push_back(cs);
          continue;
        }
        auto rb = eliminate_int_var(b, cs, Policy::Exact);
        for (const auto& cs2 : rb.sets.sets) mid.sets.push_back(cs2);
      }
      return mid;
    };
    ConSets xy = elimTwo(sx, sy), yx = elimTwo(sy, sx);
    for (int64_t z = -20; z <= 20; ++z) {
      std::map<Sym, Int> env{{sz, z}};
      CHECK(eval_consets(xy, env) == eval_consets(yx, env));
    }
  }
}
