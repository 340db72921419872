#pragma once

#include "ctrabs/formula.hpp"

#include <map>
#include <optional>

namespace ctrabs::logic {

// Sum of c*sym + k. No zero coefficients stored.
struct Linear {
  std::map<Sym, Int> c;
  Int k = 0;

  void add_coeff(const Sym& s, const Int& v);
  Linear& operator+=(const Linear& o);
  Linear& operator-=(const Linear& o);
  Linear scaled(const Int& f) const;
  Linear negated() const;
  bool is_const() const { return c.empty(); }
  Int coeff(const Sym& s) const;
  // replace sym by a linear term
  Linear substituted(const Sym& s, const Linear& repl) const;
  Int gcd_coeffs() const; // 0 if no coeffs
  friend bool operator==(const Linear& a, const Linear& b) { return a.k == b.k && a.c == b.c; }
  friend bool operator<(const Linear& a, const Linear& b) {
    if (a.c != b.c) return a.c < b.c;
    return a.k < b.k;
  }
};

// One linear constraint: lin ⋈ 0. Lt is normalized away by normalize()
// (lin < 0 iff lin + 1 <= 0 over the integers).
struct LinCon {
  enum class K { Eq, Le, Lt, Cong, NCong } k = K::Le;
  Linear lin;
  Int mod; // Cong / NCong, >= 2

  // Canonical form: Lt -> Le; gcd-tightened; Eq sign-normalized; congruence
  // coefficients reduced into [0, mod). Returns 0 (false), 1 (true) when the
  // constraint is decided, -1 otherwise.
  int normalize();
  friend bool operator==(const LinCon& a, const LinCon& b) {
    return a.k == b.k && a.mod == b.mod && a.lin == b.lin;
  }
  friend bool operator<(const LinCon& a, const LinCon& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.mod != b.mod) return a.mod < b.mod;
    return a.lin < b.lin;
  }
};

// Interns cardinality terms as Opaque symbols so QE can treat them as
// uninterpreted integers (card bodies never contain the variables being
// eliminated).
struct CardAbs {
  std::vector<Term> cards;
  std::vector<std::string> keys;
  Sym intern(const Term& cardTerm);
  const Term& term_of(const Sym& s) const;
};

// Fails (returns nullopt) on Read or FloorDiv nodes; Card nodes require a
// CardAbs, otherwise fail too.
std::optional<Linear> linearize(const Term& t, CardAbs* cards = nullptr);

} // namespace ctrabs::logic
