#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctrabs/eval.hpp"
#include "ctrabs/print.hpp"
#include "ctrabs/simplify.hpp"

#include "helpers.hpp"

#include <random>

using namespace ctrabs;
using namespace ctrabs::logic;

namespace {

// tiny fixed vocabulary for randomized tests: sort Val={v0,v1}, arrays V,B
// over Val, intvar w, param N
VocabPtr tiny_vocab() {
  auto v = std::make_shared<Vocab>();
  v->params = {"N"};
  v->sorts.push_back({"Val", {"v0", "v1"}});
  v->intvars.push_back({"w", false});
  v->arrays.push_back({"V", ArrayKind::Enumerated, 0});
  v->arrays.push_back({"B", ArrayKind::Enumerated, 0});
  return v;
}

Sym symW() { return {SymKind::IntVar, "w", false}; }
Sym symN() { return {SymKind::Param, "N", false}; }

struct Gen {
  std::mt19937 rng{20240817};
  int pick(int n) { return (int)(rng() % (unsigned)n); }
  Int num() { return Int(pick(21) - 10); }

  Term term(int depth) {
    switch (depth <= 0 ? pick(3) : pick(6)) {
      case 0: return t_num(num());
      case 1: return t_sym(symW());
      case 2: return t_sym(symN());
      case 3: return t_add(term(depth - 1), term(depth - 1));
      case 4: return t_mul(Int(pick(5) - 2), term(depth - 1));
      default: return t_card("k", dataF("k", depth - 1));
    }
  }

  Formula dataAtom(const std::string& var) {
    if (pick(3) == 0) return f_atom(a_data_arr(0, false, 1, false, var));
    return f_atom(a_data_const(pick(2), false, var, pick(2)));
  }

  Formula dataF(const std::string& var, int depth) {
    if (depth <= 0) return dataAtom(var);
    switch (pick(5)) {
      case 0: return f_not(dataF(var, depth - 1));
      case 1: return f_and({dataF(var, depth - 1), dataF(var, depth - 1)});
      case 2: return f_or({dataF(var, depth - 1), dataF(var, depth - 1)});
      default: return dataAtom(var);
    }
  }

  Formula arithAtom(int depth) {
    CmpOp ops[] = {CmpOp::Eq, CmpOp::Lt, CmpOp::Le};
    if (pick(5) == 0) return f_atom(a_cong(term(depth), term(depth), Int(2 + pick(2))));
    return f_atom(a_cmp(ops[pick(3)], term(depth), term(depth)));
  }

  Formula formula(int depth) {
    if (depth <= 0) {
      switch (pick(4)) {
        case 0: return f_true();
        case 1: return f_false();
        default: return arithAtom(0);
      }
    }
    switch (pick(6)) {
      case 0: return f_not(formula(depth - 1));
      case 1: return f_and({formula(depth - 1), formula(depth - 1)});
      case 2: return f_or({formula(depth - 1), formula(depth - 1)});
      case 3: return f_forall("i", f_or({dataF("i", depth - 1), arithAtom(depth - 1)}));
      default: return arithAtom(depth - 1);
    }
  }

  ConcreteState state() {
    ConcreteState s;
    s.n = 1 + pick(5);
    s.params["N"] = s.n;
    s.ints["w"] = pick(21) - 10;
    s.arrs.resize(2);
    for (int a = 0; a < 2; ++a) {
      s.arrs[a].resize(s.n);
      for (int64_t p = 0; p < s.n; ++p) s.arrs[a][p] = pick(2);
    }
    return s;
  }
};

} // namespace

TEST_CASE("eval: one-third init formula") {
  auto spec = th::ot_spec();
  // iota = N > 2 and forall x A(x) = bot
  Formula iota = f_and({f_atom(a_cmp(CmpOp::Lt, t_num(2), t_sym(symN()))),
                        f_forall("x", f_atom(a_data_const(1, false, "x", 0)))});
  ConcreteState s;
  s.n = 3;
  s.params["N"] = 3;
  s.arrs.resize(4);
  s.arrs[0] = {0, 0, 1};    // V
  s.arrs[1] = {0, 0, 0};    // A = bot everywhere
  EvalCtx ctx;
  ctx.vocab = spec.vocab.get();
  ctx.pre = &s;
  CHECK(eval_formula(iota, ctx));

  ConcreteState s2 = s;
  s2.n = 2;
  s2.params["N"] = 2;
  s2.arrs[0] = {0, 0};
  s2.arrs[1] = {0, 0};
  EvalCtx ctx2;
  ctx2.vocab = spec.vocab.get();
  ctx2.pre = &s2;
  CHECK_FALSE(eval_formula(iota, ctx2));
}

TEST_CASE("eval: cardinality counts satisfying indices") {
  auto spec = th::ot_spec();
  // z00 = #{i | A(i)=a0 and V(i)=v0} on A=[a0,bot,a0], V=[v0,v1,v0]: indices {0,2}
  ConcreteState s;
  s.n = 3;
  s.params["N"] = 3;
  s.arrs.resize(4);
  s.arrs[0] = {0, 1, 0}; // V = v0,v1,v0
  s.arrs[1] = {1, 0, 1}; // A = a0,bot,a0
  Term card = t_card("i", f_and({f_atom(a_data_const(1, false, "i", 1)),
                                 f_atom(a_data_const(0, false, "i", 0))}));
  EvalCtx ctx;
  ctx.vocab = spec.vocab.get();
  ctx.pre = &s;
  CHECK(eval_term(card, ctx) == 2);
  Formula eq = f_atom(a_cmp(CmpOp::Eq, t_sym({SymKind::Counter, "z00", false}), card));
  ctx.symEnv[{SymKind::Counter, "z00", false}] = 2;
  CHECK(eval_formula(eq, ctx));
}

TEST_CASE("eval: unbounded existential errors without a bound") {
  Formula f = f_exists_int("t", f_atom(a_cmp(CmpOp::Eq, t_sym({SymKind::Derived, "t", false}),
                                             t_num(3))));
  EvalCtx ctx;
  CHECK_THROWS_AS(eval_formula(f, ctx), Error);
  ctx.existsBound = 5;
  CHECK(eval_formula(f, ctx));
}

TEST_CASE("free_symbols") {
  CHECK(free_symbols(f_true()).syms.empty());
  Formula iota = f_and({f_atom(a_cmp(CmpOp::Lt, t_num(2), t_sym(symN()))),
                        f_forall("x", f_atom(a_data_const(1, false, "x", 0)))});
  auto fs = free_symbols(iota);
  CHECK(fs.syms.size() == 1);
  CHECK(fs.syms.begin()->name == "N");
  CHECK(fs.arrays.count({1, false}) == 1);
  // delta conjunct for z00: z00 = #{i | A(i)=a0 and V(i)=v0}
  Formula delta = f_atom(a_cmp(
      CmpOp::Eq, t_sym({SymKind::Counter, "z00", false}),
      t_card("i", f_and({f_atom(a_data_const(1, false, "i", 1)),
                         f_atom(a_data_const(0, false, "i", 0))}))));
  auto ds = free_symbols(delta);
  CHECK(ds.syms.count({SymKind::Counter, "z00", false}) == 1);
  CHECK(ds.arrays.count({0, false}) == 1);
  CHECK(ds.arrays.count({1, false}) == 1);
  CHECK(ds.hasCard);
}

TEST_CASE("substitute: homomorphic replacement and identity") {
  // 0 <= a(i) and a(i) <= N with read a(i) replaced by x
  Formula f = f_and({f_atom(a_cmp(CmpOp::Le, t_num(0), t_read(2, false, "i"))),
                     f_atom(a_cmp(CmpOp::Le, t_read(2, false, "i"), t_sym(symN())))});
  Substitution sub;
  sub.reads[{2, false}] = Sym{SymKind::Skolem, "x", false};
  Formula g = substitute(f, sub);
  CHECK(print_formula(g, nullptr) == "0 <= x & x <= N");
  Substitution empty;
  CHECK(struct_eq(substitute(f, empty), f));
}

TEST_CASE("prime_state maps delta to delta'") {
  Formula delta = f_atom(a_cmp(
      CmpOp::Eq, t_sym({SymKind::Counter, "z00", false}),
      t_card("i", f_and({f_atom(a_data_const(1, false, "i", 1)),
                         f_atom(a_data_const(0, false, "i", 0))}))));
  Formula primed = prime_state(delta);
  auto fs = free_symbols(primed);
  CHECK(fs.syms.count({SymKind::Counter, "z00", true}) == 1);
  CHECK(fs.arrays.count({0, true}) == 1);
  CHECK(fs.arrays.count({1, true}) == 1);
  CHECK(fs.arrays.count({0, false}) == 0);
}

TEST_CASE("simplify: guaranteed rewrites") {
  Term x = t_sym(symW());
  CHECK(simplify(f_atom(a_cmp(CmpOp::Lt, x, x)))->k == FNode::K::False);
  Formula p = f_atom(a_cmp(CmpOp::Le, x, t_num(3)));
  CHECK(struct_eq(simplify(f_and({f_true(), p})), p));
  auto vocab = tiny_vocab();
  Formula contra = f_and({f_atom(a_data_const(0, false, "i", 0)),
                          f_atom(a_data_const(0, false, "i", 1))});
  CHECK(simplify(contra, vocab.get())->k == FNode::K::False);
  // ground numeric atoms fold
  CHECK(simplify(f_atom(a_cmp(CmpOp::Lt, t_num(1), t_num(2))))->k == FNode::K::True);
  CHECK(simplify(f_atom(a_cong(t_num(4), t_num(1), Int(3))))->k == FNode::K::True);
  // duplicate literal removal
  Formula pp = simplify(f_and({p, p}));
  CHECK(struct_eq(pp, p));
}

TEST_CASE("atoms_of: deterministic dedup listing") {
  CHECK(atoms_of(f_true()).arithmetic.empty());
  Term x = t_sym(symW());
  Formula p = f_atom(a_cmp(CmpOp::Le, x, t_num(3)));
  auto listing = atoms_of(f_and({p, p}));
  CHECK(listing.arithmetic.size() == 1);
  // identical across runs
  auto again = atoms_of(f_and({p, p}));
  CHECK(print_atom(listing.arithmetic[0], nullptr) == print_atom(again.arithmetic[0], nullptr));
}

TEST_CASE("property: simplify preserves eval on bounded states") {
  auto vocab = tiny_vocab();
  Gen gen;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(3);
    Formula g = simplify(f, vocab.get());
    for (int k = 0; k < 10; ++k) {
      ConcreteState s = gen.state();
      EvalCtx c1, c2;
      c1.vocab = c2.vocab = vocab.get();
      c1.pre = c2.pre = &s;
      bool a = eval_formula(f, c1), b = eval_formula(g, c2);
      REQUIRE_MESSAGE(a == b, "formula: ", print_formula(f, vocab.get()),
                      " simplified: ", print_formula(g, vocab.get()));
      ++checked;
    }
  }
  CHECK(checked == 3000);
}

TEST_CASE("property: substitute commutes with eval") {
  auto vocab = tiny_vocab();
  Gen gen;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.formula(3);
    Term repl = gen.term(1);
    if (free_symbols(repl).syms.count(symW())) continue; // keep it capture-free
    Substitution sub;
    sub.syms[symW()] = repl;
    Formula g = substitute(f, sub);
    for (int k = 0; k < 8; ++k) {
      ConcreteState s = gen.state();
      EvalCtx cr;
      cr.vocab = vocab.get();
      cr.pre = &s;
      int64_t tv = eval_term(repl, cr);
      ConcreteState s2 = s;
      s2.ints["w"] = tv;
      EvalCtx c1, c2;
      c1.vocab = c2.vocab = vocab.get();
      c1.pre = &s2;
      c2.pre = &s;
      bool lhs = eval_formula(f, c1);  // f with w := eval(t)
      bool rhs = eval_formula(g, c2);  // f[w := t]
      REQUIRE_MESSAGE(lhs == rhs, "formula: ", print_formula(f, vocab.get()),
                      " repl: ", print_term(repl, vocab.get()));
    }
  }
}

TEST_CASE("printer round-trips through the expression parser") {
  Gen gen;
  for (int i = 0; i < 100; ++i) {
    Term t = gen.term(3);
    std::string s1 = print_term(t, nullptr);
    // parseability is checked at the spec level (test_frontend); here we only
    // require printing to be deterministic
    CHECK(s1 == print_term(t, nullptr));
  }
}
