#include "ctrabs/linear.hpp"

#include "ctrabs/print.hpp"

namespace ctrabs::logic {

void Linear::add_coeff(const Sym& s, const Int& v) {
  if (v == 0) return;
  auto it = c.find(s);
  if (it == c.end()) {
    c.emplace(s, v);
  } else {
    it->second += v;
    if (it->second == 0) c.erase(it);
  }
}

Linear& Linear::operator+=(const Linear& o) {
  for (const auto& [s, v] : o.c) add_coeff(s, v);
  k += o.k;
  return *this;
}

Linear& Linear::operator-=(const Linear& o) {
  for (const auto& [s, v] : o.c) add_coeff(s, -v);
  k -= o.k;
  return *this;
}

Linear Linear::scaled(const Int& f) const {
  Linear r;
  if (f == 0) return r;
  for (const auto& [s, v] : c) r.c.emplace(s, v * f);
  r.k = k * f;
  return r;
}

Linear Linear::negated() const { return scaled(-1); }

Int Linear::coeff(const Sym& s) const {
  auto it = c.find(s);
  return it == c.end() ? Int(0) : it->second;
}

Linear Linear::substituted(const Sym& s, const Linear& repl) const {
  auto it = c.find(s);
  if (it == c.end()) return *this;
  Linear r = *this;
  Int f = it->second;
  r.c.erase(s);
  r += repl.scaled(f);
  return r;
}

Int Linear::gcd_coeffs() const {
  Int g = 0;
  for (const auto& [s, v] : c) g = int_gcd(g, v < 0 ? Int(-v) : v);
  return g;
}

int LinCon::normalize() {
  if (k == K::Lt) { // lin < 0  <=>  lin + 1 <= 0
    k = K::Le;
    lin.k += 1;
  }
  switch (k) {
    case K::Eq: {
      if (lin.is_const()) return lin.k == 0 ? 1 : 0;
      Int g = lin.gcd_coeffs();
      if (lin.k % g != 0) return 0; // no integer solution
      lin = [&] {
        Linear r;
        for (const auto& [s, v] : lin.c) r.c.emplace(s, v / g);
        r.k = lin.k / g;
        return r;
      }();
      if (lin.c.begin()->second < 0) lin = lin.negated();
      return -1;
    }
    case K::Le: {
      if (lin.is_const()) return lin.k <= 0 ? 1 : 0;
      Int g = lin.gcd_coeffs();
      if (g > 1) {
        Linear r;
        for (const auto& [s, v] : lin.c) r.c.emplace(s, v / g);
        // sum(g*ci*xi) + k <= 0  <=>  sum(ci*xi) + ceil(k/g) <= 0
        r.k = -floor_div(-lin.k, g);
        lin = r;
      }
      return -1;
    }
    case K::Cong:
    case K::NCong: {
      Linear r;
      for (const auto& [s, v] : lin.c) {
        Int m = pos_mod(v, mod);
        if (m != 0) r.c.emplace(s, m);
      }
      r.k = pos_mod(lin.k, mod);
      lin = r;
      if (lin.is_const()) {
        bool holds = (lin.k == 0);
        if (k == K::NCong) holds = !holds;
        return holds ? 1 : 0;
      }
      return -1;
    }
    case K::Lt: break; // unreachable
  }
  return -1;
}

Sym CardAbs::intern(const Term& cardTerm) {
  std::string key = print_term(cardTerm);
  for (size_t i = 0; i < keys.size(); ++i)
    if (keys[i] == key) return Sym{SymKind::Opaque, "#" + std::to_string(i), false};
  keys.push_back(key);
  cards.push_back(cardTerm);
  return Sym{SymKind::Opaque, "#" + std::to_string(keys.size() - 1), false};
}

const Term& CardAbs::term_of(const Sym& s) const {
  size_t idx = std::stoul(s.name.substr(1));
  return cards.at(idx);
}

std::optional<Linear> linearize(const Term& t, CardAbs* cardAbs) {
  switch (t->k) {
    case TermNode::K::Num: {
      Linear r;
      r.k = t->num;
      return r;
    }
    case TermNode::K::SymRef: {
      Linear r;
      r.c.emplace(t->sym, 1);
      return r;
    }
    case TermNode::K::Read: return std::nullopt;
    case TermNode::K::Card: {
      if (!cardAbs) return std::nullopt;
      Linear r;
      r.c.emplace(cardAbs->intern(t), 1);
      return r;
    }
    case TermNode::K::Add: {
      auto a = linearize(t->a, cardAbs), b = linearize(t->b, cardAbs);
      if (!a || !b) return std::nullopt;
      *a += *b;
      return a;
    }
    case TermNode::K::Sub: {
      auto a = linearize(t->a, cardAbs), b = linearize(t->b, cardAbs);
      if (!a || !b) return std::nullopt;
      *a -= *b;
      return a;
    }
    case TermNode::K::Mul: {
      auto a = linearize(t->a, cardAbs);
      if (!a) return std::nullopt;
      return a->scaled(t->num);
    }
    case TermNode::K::FloorDiv: return std::nullopt;
  }
  return std::nullopt;
}

} // namespace ctrabs::logic
