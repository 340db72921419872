#include "ctrabs/qe.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ctrabs::qe {

using logic::SymKind;

bool ConSet::mentions(const Sym& x) const {
  for (const auto& c : cons)
    if (c.lin.c.count(x)) return true;
  return false;
}

size_t ConSets::atom_count() const {
  size_t n = 0;
  for (const auto& s : sets) n += s.atom_count();
  return n;
}

void sort_conset(ConSet& c) {
  std::sort(c.cons.begin(), c.cons.end());
  c.cons.erase(std::unique(c.cons.begin(), c.cons.end()), c.cons.end());
}

bool simplify_conset(ConSet& c) {
  std::vector<LinCon> kept;
  // same-linear bound merging: for a linear L track max lower, min upper, eq
  struct Bounds {
    std::optional<Int> maxLo, minHi, eq; // lo <= L <= hi, L = eq
  };
  std::map<std::map<Sym, Int>, Bounds> byLin;
  std::vector<LinCon> congs;
  for (LinCon con : c.cons) {
    int dec = con.normalize();
    if (dec == 0) return false;
    if (dec == 1) continue;
    if (con.k == LinCon::K::Cong || con.k == LinCon::K::NCong) {
      congs.push_back(std::move(con));
      continue;
    }
    // lin + k <= 0  =>  lin' <= -k where lin' = coeffs only
    Linear coeffsOnly = con.lin;
    Int k = coeffsOnly.k;
    coeffsOnly.k = 0;
    bool neg = coeffsOnly.c.begin()->second < 0;
    auto key = (neg ? coeffsOnly.negated() : coeffsOnly).c;
    Bounds& b = byLin[key];
    if (con.k == LinCon::K::Eq) {
      Int v = neg ? k : -k; // lin = v in key orientation
      if (b.eq && *b.eq != v) return false;
      b.eq = v;
    } else { // Le
      if (!neg) {
        Int hi = -k;
        if (!b.minHi || hi < *b.minHi) b.minHi = hi;
      } else {
        Int lo = k;
        if (!b.maxLo || lo > *b.maxLo) b.maxLo = lo;
      }
    }
  }
  for (auto& [key, b] : byLin) {
    if (b.eq) {
      if (b.minHi && *b.eq > *b.minHi) return false;
      if (b.maxLo && *b.eq < *b.maxLo) return false;
      b.minHi.reset();
      b.maxLo.reset();
    } else if (b.maxLo && b.minHi) {
      if (*b.maxLo > *b.minHi) return false;
      if (*b.maxLo == *b.minHi) {
        b.eq = *b.maxLo;
        b.maxLo.reset();
        b.minHi.reset();
      }
    }
    Linear base;
    base.c = key;
    if (b.eq) {
      LinCon e;
      e.k = LinCon::K::Eq;
      e.lin = base;
      e.lin.k = -*b.eq;
      e.normalize();
      kept.push_back(std::move(e));
    }
    if (b.minHi) {
      LinCon u;
      u.k = LinCon::K::Le;
      u.lin = base;
      u.lin.k = -*b.minHi;
      kept.push_back(std::move(u));
    }
    if (b.maxLo) {
      LinCon l;
      l.k = LinCon::K::Le;
      l.lin = base.negated();
      l.lin.k = *b.maxLo;
      kept.push_back(std::move(l));
    }
  }
  // congruence contradictions on identical linears
  std::map<std::pair<std::map<Sym, Int>, Int>, std::pair<std::set<Int>, std::set<Int>>> congBy;
  for (auto& con : congs) {
    Linear coeffsOnly = con.lin;
    Int k = pos_mod(coeffsOnly.k, con.mod);
    coeffsOnly.k = 0;
    auto key = std::make_pair(coeffsOnly.c, con.mod);
    auto& [eqs, neqs] = congBy[key];
    // lin + k ≡ 0 (mod m)  <=>  lin ≡ -k
    Int r = pos_mod(-k, con.mod);
    if (con.k == LinCon::K::Cong) {
      eqs.insert(r);
    } else {
      neqs.insert(r);
    }
  }
  for (auto& [key, rs] : congBy) {
    auto& [eqs, neqs] = rs;
    if (eqs.size() > 1) return false;
    if (eqs.size() == 1 && neqs.count(*eqs.begin())) return false;
    Linear base;
    base.c = key.first;
    for (const Int& r : eqs) {
      LinCon cc;
      cc.k = LinCon::K::Cong;
      cc.mod = key.second;
      cc.lin = base;
      cc.lin.k = pos_mod(-r, key.second);
      kept.push_back(std::move(cc));
    }
    for (const Int& r : neqs) {
      LinCon cc;
      cc.k = LinCon::K::NCong;
      cc.mod = key.second;
      cc.lin = base;
      cc.lin.k = pos_mod(-r, key.second);
      kept.push_back(std::move(cc));
    }
  }
  c.cons = std::move(kept);
  sort_conset(c);
  return true;
}

static ConSet substitute_set(const ConSet& c, const Sym& x, const Linear& repl, bool dropDefining) {
  ConSet out;
  out.cons.reserve(c.cons.size());
  for (const auto& con : c.cons) {
    LinCon nc = con;
    nc.lin = con.lin.substituted(x, repl);
    out.cons.push_back(std::move(nc));
  }
  (void)dropDefining;
  return out;
}

std::optional<ConSet> try_substitution(const Sym& x, const ConSet& c) {
  for (size_t i = 0; i < c.cons.size(); ++i) {
    const LinCon& con = c.cons[i];
    if (con.k != LinCon::K::Eq) continue;
    Int a = con.lin.coeff(x);
    if (a != 1 && a != -1) continue;
    // a*x + rest = 0  =>  x = -a*rest
    Linear rest = con.lin;
    rest.c.erase(x);
    Linear repl = rest.scaled(-a);
    ConSet out;
    out.cons.reserve(c.cons.size() - 1);
    for (size_t j = 0; j < c.cons.size(); ++j) {
      if (j == i) continue;
      LinCon nc = c.cons[j];
      nc.lin = nc.lin.substituted(x, repl);
      out.cons.push_back(std::move(nc));
    }
    return out;
  }
  return std::nullopt;
}

namespace {

struct CooperParts {
  std::vector<LinCon> context; // x-free
  std::vector<LinCon> scaled;  // over the unit variable y
  Int m = 1;                   // lcm of |coeff(x)|
};

CooperParts scale_to_unit(const Sym& x, const ConSet& c, const Sym& y) {
  CooperParts p;
  for (const auto& con : c.cons) {
    Int a = con.lin.coeff(x);
    if (a == 0) {
      p.context.push_back(con);
      continue;
    }
    p.m = int_lcm(p.m, a < 0 ? Int(-a) : a);
  }
  for (const auto& con : c.cons) {
    Int a = con.lin.coeff(x);
    if (a == 0) continue;
    Int f = p.m / (a < 0 ? Int(-a) : a);
    LinCon nc = con;
    nc.lin = con.lin.scaled(f);
    if (nc.k == LinCon::K::Cong || nc.k == LinCon::K::NCong) nc.mod = con.mod * f;
    // replace (±m)·x by (±1)·y
    Int ax = nc.lin.coeff(x);
    nc.lin.c.erase(x);
    nc.lin.c.emplace(y, ax > 0 ? 1 : -1);
    p.scaled.push_back(std::move(nc));
  }
  if (p.m > 1) {
    LinCon cong;
    cong.k = LinCon::K::Cong;
    cong.mod = p.m;
    cong.lin.c.emplace(y, 1);
    p.scaled.push_back(std::move(cong));
  }
  return p;
}

// substitute y := repl in the scaled constraints, append context, normalize
std::optional<ConSet> instantiate(const CooperParts& p, const Sym& y, const Linear& repl) {
  ConSet out;
  out.cons = p.context;
  for (const auto& con : p.scaled) {
    LinCon nc = con;
    nc.lin = con.lin.substituted(y, repl);
    out.cons.push_back(std::move(nc));
  }
  if (!simplify_conset(out)) return std::nullopt;
  return out;
}

} // namespace

ConSets cooper(const Sym& x, const ConSet& raw) {
  ConSets result;
  ConSet c = raw;
  if (!simplify_conset(c)) return result; // normalizes Lt away, merges bounds
  if (!c.mentions(x)) {
    result.sets.push_back(std::move(c));
    return result;
  }
  Sym y{SymKind::Skolem, "y$cooper", false};
  CooperParts p = scale_to_unit(x, c, y);

  // unit equality after scaling: substitute directly
  for (size_t i = 0; i < p.scaled.size(); ++i) {
    const LinCon& con = p.scaled[i];
    if (con.k != LinCon::K::Eq) continue;
    Int a = con.lin.coeff(y);
    if (a != 1 && a != -1) continue;
    Linear rest = con.lin;
    rest.c.erase(y);
    Linear repl = rest.scaled(-a);
    ConSet out;
    out.cons = p.context;
    for (size_t j = 0; j < p.scaled.size(); ++j) {
      if (j == i) continue;
      LinCon nc = p.scaled[j];
      nc.lin = nc.lin.substituted(y, repl);
      out.cons.push_back(std::move(nc));
    }
    if (simplify_conset(out)) result.sets.push_back(std::move(out));
    return result;
  }

  // strict bound decomposition over integers:
  //   y + r <= 0   =>  y < -r + 1      (upper term -r + 1)
  //   -y + r <= 0  =>  r - 1 < y       (lower term r - 1)
  std::vector<Linear> lowers, uppers;
  std::vector<LinCon> periodic; // congruences on y
  Int delta = 1;
  for (const auto& con : p.scaled) {
    if (con.k == LinCon::K::Cong || con.k == LinCon::K::NCong) {
      periodic.push_back(con);
      delta = int_lcm(delta, con.mod);
      continue;
    }
    Int a = con.lin.coeff(y);
    Linear rest = con.lin;
    rest.c.erase(y);
    if (con.k == LinCon::K::Eq) {
      // handled above when unit; coefficients here are ±1 by construction
      fail(ErrKind::Internal, "cooper: non-unit equality after scaling");
    }
    if (a > 0) {
      Linear u = rest.negated();
      u.k += 1;
      uppers.push_back(std::move(u));
    } else {
      Linear l = rest;
      l.k -= 1;
      lowers.push_back(std::move(l));
    }
  }

  bool useLowers = lowers.size() <= uppers.size();
  const std::vector<Linear>& bounds = useLowers ? lowers : uppers;

  if (bounds.empty()) {
    // infinite projection: only congruences constrain y
    for (Int j = 1; j <= delta; ++j) {
      ConSet out;
      out.cons = p.context;
      Linear repl;
      repl.k = j;
      for (const auto& con : periodic) {
        LinCon nc = con;
        nc.lin = con.lin.substituted(y, repl);
        out.cons.push_back(std::move(nc));
      }
      // inequalities on the unbounded side are all satisfiable for some y;
      // with no bounds on one side they impose nothing
      if (useLowers) {
        // no lower bounds: pick y arbitrarily small; uppers hold eventually.
        // still need uppers consistent with periodic y: uppers become true.
      }
      if (simplify_conset(out)) result.sets.push_back(std::move(out));
    }
  } else {
    for (const auto& b : bounds) {
      for (Int j = 1; j <= delta; ++j) {
        Linear repl = b;
        if (useLowers)
          repl.k += j; // y := b + j
        else
          repl.k -= j; // y := a - j
        auto inst = instantiate(p, y, repl);
        if (inst) result.sets.push_back(std::move(*inst));
      }
    }
  }
  // dedup disjuncts
  std::sort(result.sets.begin(), result.sets.end(),
            [](const ConSet& a, const ConSet& b) { return a.cons < b.cons; });
  result.sets.erase(std::unique(result.sets.begin(), result.sets.end(),
                                [](const ConSet& a, const ConSet& b) { return a.cons == b.cons; }),
                    result.sets.end());
  return result;
}

ConSet fm_real(const Sym& x, const ConSet& raw) {
  ConSet out;
  ConSet c = raw;
  for (auto& con : c.cons) con.normalize(); // integer-tightens Lt into Le
  std::vector<std::pair<Int, Linear>> uppers, lowers; // (|a|, full lin with x removed pending)
  for (const auto& con : c.cons) {
    Int a = con.lin.coeff(x);
    if (a == 0) {
      out.cons.push_back(con);
      continue;
    }
    if (con.k == LinCon::K::Cong || con.k == LinCon::K::NCong) continue; // dropped (relaxation)
    Linear rest = con.lin;
    rest.c.erase(x);
    if (con.k == LinCon::K::Eq) {
      if (a > 0) {
        uppers.emplace_back(a, rest);
        lowers.emplace_back(a, rest.negated());
      } else {
        lowers.emplace_back(-a, rest);
        uppers.emplace_back(-a, rest.negated());
      }
      continue;
    }
    // a*x + rest <= 0
    if (a > 0)
      uppers.emplace_back(a, rest); // a*x <= -rest
    else
      lowers.emplace_back(-a, rest); // (-a)*x >= rest
  }
  for (const auto& [a, r] : uppers) {
    for (const auto& [b, s] : lowers) {
      // s <= b*x and a*x <= -r  =>  a*s + b*r <= 0
      LinCon nc;
      nc.k = LinCon::K::Le;
      nc.lin = s.scaled(a);
      nc.lin += r.scaled(b);
      out.cons.push_back(std::move(nc));
    }
  }
  simplify_conset(out); // best effort; caller treats result as a conjunction
  return out;
}

ElimResult eliminate_int_var(const Sym& x, const ConSet& c, Policy policy, size_t relaxBudget,
                             ElimStats* stats) {
  ElimResult r;
  if (auto sub = try_substitution(x, c)) {
    if (stats) stats->substitutions++;
    ConSet s = std::move(*sub);
    if (simplify_conset(s)) r.sets.sets.push_back(std::move(s));
    return r;
  }
  ConSets byCooper = cooper(x, c);
  if (stats) stats->coopers++;
  if (policy == Policy::RelaxOnBudget && byCooper.atom_count() > relaxBudget) {
    if (stats) stats->fms++;
    ConSet byFm = fm_real(x, c);
    r.exact = false;
    r.sets.sets.push_back(std::move(byFm));
    return r;
  }
  r.sets = std::move(byCooper);
  return r;
}

namespace {

// nonnegativity witnesses: syms s with a constraint  c*s + k <= 0, c < 0, k >= 0
std::set<Sym> nonneg_witnessed(const ConSet& c) {
  std::set<Sym> w;
  for (const auto& con : c.cons) {
    if (con.k != LinCon::K::Le || con.lin.c.size() != 1) continue;
    const auto& [s, coeff] = *con.lin.c.begin();
    if (coeff < 0 && con.lin.k >= 0) w.insert(s);
  }
  return w;
}

// Equalities sum(c_i x_i) = 0 with same-sign coefficients over nonnegative
// symbols force every x_i = 0; also derivable from differences of equality
// pairs (partition law vs epsilon-equation).
std::set<Sym> zero_forced(const ConSet& c, const std::function<bool(const Sym&)>& target) {
  std::set<Sym> w = nonneg_witnessed(c);
  std::set<Sym> forced;
  std::vector<const Linear*> eqs;
  for (const auto& con : c.cons)
    if (con.k == LinCon::K::Eq) eqs.push_back(&con.lin);
  auto tryLin = [&](const Linear& lin) {
    if (lin.k != 0 || lin.c.empty()) return;
    bool pos = lin.c.begin()->second > 0;
    for (const auto& [s, v] : lin.c) {
      if ((v > 0) != pos) return;
      if (!w.count(s) || !target(s)) return;
    }
    for (const auto& [s, v] : lin.c) forced.insert(s);
  };
  for (const auto* e : eqs) tryLin(*e);
  for (size_t i = 0; i < eqs.size(); ++i) {
    for (size_t j = i + 1; j < eqs.size(); ++j) {
      Linear d = *eqs[i];
      d -= *eqs[j];
      tryLin(d);
    }
  }
  return forced;
}

} // namespace

ElimResult eliminate_all(ConSets in, const std::function<bool(const Sym&)>& target, Policy policy,
                         size_t relaxBudget, ElimStats* stats,
                         const std::function<bool(const Sym&)>& substOnly) {
  ElimResult result;
  std::vector<ConSet> work = std::move(in.sets);
  while (!work.empty()) {
    ConSet cur = std::move(work.back());
    work.pop_back();
    if (!simplify_conset(cur)) continue;
    if (stats) stats->maxIntermediate = std::max(stats->maxIntermediate, cur.cons.size());

    // zero-forced pass
    for (;;) {
      std::set<Sym> forced = zero_forced(cur, target);
      if (forced.empty()) break;
      Linear zero;
      for (const Sym& s : forced) {
        ConSet next = substitute_set(cur, s, zero, false);
        cur = std::move(next);
        if (stats) stats->zeroForced++;
      }
      if (!simplify_conset(cur)) {
        cur.cons.clear();
        cur.cons.push_back([] {
          LinCon f;
          f.k = LinCon::K::Le;
          f.lin.k = 1;
          return f;
        }());
        break;
      }
    }

    // victim selection
    std::map<Sym, int> occ;
    std::set<Sym> substitutable;
    for (const auto& con : cur.cons) {
      for (const auto& [s, v] : con.lin.c) {
        if (!target(s)) continue;
        occ[s]++;
        if (con.k == LinCon::K::Eq && (v == 1 || v == -1)) substitutable.insert(s);
      }
    }
    if (occ.empty()) {
      if (simplify_conset(cur)) result.sets.sets.push_back(std::move(cur));
      continue;
    }
    std::optional<Sym> victim;
    for (const auto& s : substitutable) {
      if (!substOnly || !substOnly(s)) {
        victim = s;
        break;
      }
    }
    if (!victim) {
      // substitution-only syms that are substitutable
      if (!substitutable.empty()) victim = *substitutable.begin();
    }
    if (victim) {
      auto sub = try_substitution(*victim, cur);
      if (sub) {
        if (stats) stats->substitutions++;
        work.push_back(std::move(*sub));
        continue;
      }
    }
    // no equalities: Cooper (or relax) on the least-occurring hard sym
    std::optional<Sym> hard;
    int best = -1;
    for (const auto& [s, n] : occ) {
      if (substOnly && substOnly(s)) continue; // keep derived locals
      if (best < 0 || n < best || (n == best && s < *hard)) {
        best = n;
        hard = s;
      }
    }
    if (!hard) {
      // only substitution-only symbols remain: they stay in the result
      if (simplify_conset(cur)) result.sets.sets.push_back(std::move(cur));
      continue;
    }
    ElimResult step = eliminate_int_var(*hard, cur, policy, relaxBudget, stats);
    if (!step.exact) result.exact = false;
    for (auto& s : step.sets.sets) work.push_back(std::move(s));
  }
  // deterministic order
  std::sort(result.sets.sets.begin(), result.sets.sets.end(),
            [](const ConSet& a, const ConSet& b) { return a.cons < b.cons; });
  result.sets.sets.erase(
      std::unique(result.sets.sets.begin(), result.sets.sets.end(),
                  [](const ConSet& a, const ConSet& b) { return a.cons == b.cons; }),
      result.sets.sets.end());
  return result;
}

bool interval_unsat(const ConSet& c, int maxRounds) {
  struct Range {
    std::optional<Int> lo, hi;
  };
  std::map<Sym, Range> r;
  std::vector<LinCon> les;
  for (const auto& con : c.cons) {
    if (con.k == LinCon::K::Le) {
      les.push_back(con);
    } else if (con.k == LinCon::K::Eq) {
      LinCon a = con, b = con;
      a.k = LinCon::K::Le;
      b.k = LinCon::K::Le;
      b.lin = con.lin.negated();
      les.push_back(a);
      les.push_back(b);
    }
  }
  bool changed = true;
  for (int round = 0; round < maxRounds && changed; ++round) {
    changed = false;
    for (const auto& con : les) {
      // sum c_i x_i + k <= 0: bound each x_j using extremes of the others
      for (const auto& [xj, cj] : con.lin.c) {
        Int rest = con.lin.k;
        bool unbounded = false;
        for (const auto& [xi, ci] : con.lin.c) {
          if (xi == xj) continue;
          const Range& ri = r[xi];
          // minimize ci*xi
          if (ci > 0) {
            if (!ri.lo) {
              unbounded = true;
              break;
            }
            rest += ci * *ri.lo;
          } else {
            if (!ri.hi) {
              unbounded = true;
              break;
            }
            rest += ci * *ri.hi;
          }
        }
        if (unbounded) continue;
        Range& rj = r[xj];
        if (cj > 0) {
          Int hi = floor_div(-rest, cj);
          if (!rj.hi || hi < *rj.hi) {
            rj.hi = hi;
            changed = true;
          }
        } else {
          Int lo = -floor_div(-rest, -cj); // ceil(rest / -cj) = -floor(-rest / -cj)
          if (!rj.lo || lo > *rj.lo) {
            rj.lo = lo;
            changed = true;
          }
        }
        if (rj.lo && rj.hi && *rj.lo > *rj.hi) return true;
      }
    }
  }
  return false;
}

bool fm_ground_unsat(const ConSet& c, size_t cap) {
  std::vector<LinCon> les;
  std::set<Sym> syms;
  for (const auto& con : c.cons) {
    if (con.k == LinCon::K::Cong || con.k == LinCon::K::NCong) continue;
    if (con.k == LinCon::K::Eq) {
      LinCon a = con, b = con;
      a.k = LinCon::K::Le;
      b.k = LinCon::K::Le;
      b.lin = con.lin.negated();
      les.push_back(a);
      les.push_back(b);
    } else {
      les.push_back(con);
    }
    for (const auto& [s, v] : con.lin.c) syms.insert(s);
  }
  ConSet cur;
  cur.cons = std::move(les);
  while (!syms.empty()) {
    if (!simplify_conset(cur)) return true;
    if (cur.cons.size() > cap) return false; // inconclusive
    // fewest occurrences first
    std::map<Sym, int> occ;
    for (const auto& con : cur.cons)
      for (const auto& [s, v] : con.lin.c) occ[s]++;
    if (occ.empty()) break;
    Sym victim = occ.begin()->first;
    int best = occ.begin()->second;
    for (const auto& [s, n] : occ) {
      if (n < best) {
        victim = s;
        best = n;
      }
    }
    cur = fm_real(victim, cur);
    syms.clear();
    for (const auto& con : cur.cons)
      for (const auto& [s, v] : con.lin.c) syms.insert(s);
  }
  if (!simplify_conset(cur)) return true;
  for (const auto& con : cur.cons) {
    if (con.lin.is_const()) {
      if (con.k == LinCon::K::Le && con.lin.k > 0) return true;
      if (con.k == LinCon::K::Eq && con.lin.k != 0) return true;
    }
  }
  return false;
}

bool eval_lincon(const LinCon& c, const std::map<Sym, Int>& env) {
  Int v = c.lin.k;
  for (const auto& [s, coeff] : c.lin.c) {
    auto it = env.find(s);
    if (it == env.end()) fail(ErrKind::UnboundSymbol, "eval_lincon: unbound " + s.name);
    v += coeff * it->second;
  }
  switch (c.k) {
    case LinCon::K::Eq: return v == 0;
    case LinCon::K::Le: return v <= 0;
    case LinCon::K::Lt: return v < 0;
    case LinCon::K::Cong: return pos_mod(v, c.mod) == 0;
    case LinCon::K::NCong: return pos_mod(v, c.mod) != 0;
  }
  return false;
}

bool eval_conset(const ConSet& c, const std::map<Sym, Int>& env) {
  for (const auto& con : c.cons)
    if (!eval_lincon(con, env)) return false;
  return true;
}

bool eval_consets(const ConSets& c, const std::map<Sym, Int>& env) {
  for (const auto& s : c.sets)
    if (eval_conset(s, env)) return true;
  return false;
}

} // namespace ctrabs::qe
