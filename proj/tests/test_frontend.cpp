#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctrabs/eval.hpp"
#include "ctrabs/parser.hpp"
#include "ctrabs/print.hpp"

#include "helpers.hpp"

using namespace ctrabs;
using namespace ctrabs::front;
using namespace ctrabs::logic;

namespace {

const char* kTinySpec = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";

ErrKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind;
  }
  return ErrKind::Internal;
}

} // namespace

TEST_CASE("parse: one-third spec declarations") {
  ParsedSpec ps = parse_spec(read_file(th::bench_path("ot/spec.cf")));
  CHECK(ps.params == std::vector<std::string>{"N"});
  int enums = 0, ariths = 0;
  for (const auto& a : ps.arrays) (a.sortName == "int" ? ariths : enums)++;
  CHECK(enums == 2);
  CHECK(ariths == 2);
  CHECK(ps.counters.size() == 6);
  CHECK(ps.transCases.size() == 9);
  // V has 2 values, A has 3
  CHECK(ps.sorts[0].values.size() == 2);
  CHECK(ps.sorts[1].values.size() == 3);
}

TEST_CASE("parse: empty file") {
  try {
    parse_spec("");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::Syntax);
    CHECK(std::string(e.what()).find("expected section 'params'") != std::string::npos);
  }
}

TEST_CASE("parse accepts, validate rejects: arithmetic array in counter body") {
  std::string text = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val; R0 : int;
counters: c0 = #{k | R0(k) = 0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";
  ParsedSpec ps = parse_spec(text); // grammar accepts
  CHECK(kind_of([&] { validate(ps); }) == ErrKind::FragmentViolation);
}

TEST_CASE("validate: two Proc-variables in one atom") {
  std::string text = R"(params: N;
sorts: Acc = {bot, a0};
arrays: A : Acc;
counters: c0 = #{k | A(k)=a0};
init: forall x . A(x)=bot;
trans:
  case A(x) = A(y) & A'(x)=A(x);
unsafe: c0 > N;
)";
  CHECK(kind_of([&] { validate(parse_spec(text)); }) == ErrKind::FragmentViolation);
}

TEST_CASE("validate: arrays forbidden in the safety formula") {
  std::string text = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: V(x) = v0;
)";
  CHECK(kind_of([&] { validate(parse_spec(text)); }) == ErrKind::FragmentViolation);
}

TEST_CASE("validate: multiple init cases") {
  std::string text = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0; forall y . V(y)=v1;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";
  CHECK(kind_of([&] { validate(parse_spec(text)); }) == ErrKind::MultipleInitCases);
}

TEST_CASE("validate: unknown symbol and duplicate declaration") {
  std::string dup = R"(params: N;
sorts: Val = {v0, v1}; Val2 = {v0, w1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";
  CHECK(kind_of([&] { validate(parse_spec(dup)); }) == ErrKind::DuplicateDeclaration);
  std::string unknown = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: nosuch > N;
)";
  CHECK(kind_of([&] { validate(parse_spec(unknown)); }) == ErrKind::UnknownSymbol);
}

TEST_CASE("validate: OT spec accepted, invariants audited") {
  SystemSpec spec = th::ot_spec();
  CHECK(spec.vocab->counters.size() == 6);
  CHECK(spec.transCases.size() == 9);
  CHECK(spec.invariantPhi.empty());
  // audit: case formulas use only the canonical case variable; counter bodies
  // are pure Data-formulae over their binder
  for (const auto& tc : spec.transCases) {
    for (const auto& lit : tc.arithLits) {
      auto fs = free_symbols(lit);
      for (const auto& s : fs.syms) CHECK(s.kind != SymKind::Skolem);
    }
  }
  for (const auto& c : spec.vocab->counters) {
    auto fs = free_symbols(c.body);
    CHECK(fs.syms.empty());
    CHECK_FALSE(fs.hasCard);
  }
  // safety formula mentions only counters
  auto bs = free_symbols(spec.safetyBad);
  CHECK(bs.arrays.empty());
  for (const auto& s : bs.syms) CHECK(s.kind == SymKind::Counter);
}

TEST_CASE("parse -> print -> parse is a fixpoint") {
  for (const std::string rel :
       {"ot/spec.cf", "ot/spec_irrev.cf", "ot_buggy/spec.cf", "srbp/spec.cf", "bbp/spec.cf"}) {
    ParsedSpec a = parse_spec(read_file(th::bench_path(rel)));
    std::string printed = print_spec(a);
    ParsedSpec b = parse_spec(printed);
    CHECK_MESSAGE(spec_struct_eq(a, b), "fixpoint failed for ", rel);
    CHECK(print_spec(b) == printed);
  }
  ParsedSpec t = parse_spec(kTinySpec);
  CHECK(spec_struct_eq(t, parse_spec(print_spec(t))));
}

TEST_CASE("desugar: floor division becomes a derived local with side constraints") {
  SystemSpec spec = th::ot_spec();
  SystemSpec des = desugar_floor_div(spec);
  REQUIRE(des.derived.size() == 1);
  CHECK(des.derived[0].sym.name == "t0");
  CHECK(des.derived[0].div == 3);
  CHECK(print_term(des.derived[0].num, des.vocab.get()) == "2*N");
  CHECK_FALSE(des.derived[0].perProcess);
  // the side constraints 3*t0 <= 2*N and 2*N < 3*t0 + 3 are conjoined
  bool sawLe = false, sawLt = false;
  for (const auto& lit : des.transCases[0].arithLits) {
    std::string p = print_formula(lit, des.vocab.get());
    if (p == "3*t0 <= 2*N") sawLe = true;
    if (p == "2*N < 3*t0 + 3") sawLt = true;
  }
  CHECK(sawLe);
  CHECK(sawLt);
}

TEST_CASE("desugar: identity on division-free specs") {
  SystemSpec spec = th::load_spec(th::bench_path("srbp/spec.cf"));
  SystemSpec des = desugar_floor_div(spec);
  CHECK(des.derived.empty());
  REQUIRE(des.transCases.size() == spec.transCases.size());
  for (size_t i = 0; i < spec.transCases.size(); ++i) {
    CHECK(spec.transCases[i].arithLits.size() == des.transCases[i].arithLits.size());
    for (size_t j = 0; j < spec.transCases[i].arithLits.size(); ++j)
      CHECK(struct_eq(spec.transCases[i].arithLits[j], des.transCases[i].arithLits[j]));
  }
}

TEST_CASE("desugar: zero divisor") {
  std::string text = R"(params: N;
sorts: Val = {v0, v1};
intvars: w;
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case w div 0 > 1 & V'(x)=V(x);
unsafe: c0 > N;
)";
  SystemSpec spec = validate(parse_spec(text));
  CHECK(kind_of([&] { desugar_floor_div(spec); }) == ErrKind::NonConstantDivisor);
}

TEST_CASE("desugar preserves semantics under an existential witness") {
  // original:  u0 + u1 > (2*N) div 3
  // desugared: exists t0. u0 + u1 > t0 and 3 t0 <= 2N and 2N < 3 t0 + 3
  Sym u0{SymKind::IntVar, "u0", false}, u1{SymKind::IntVar, "u1", false};
  Sym n = {SymKind::Param, "N", false};
  Term lhs = t_add(t_sym(u0), t_sym(u1));
  Formula orig =
      f_atom(a_cmp(CmpOp::Lt, t_floordiv(t_mul(2, t_sym(n)), 3), lhs));
  Sym t0{SymKind::Derived, "t0", false};
  Formula des = f_exists_int(
      "t0", f_and({f_atom(a_cmp(CmpOp::Lt, t_sym(t0), lhs)),
                   f_atom(a_cmp(CmpOp::Le, t_mul(3, t_sym(t0)), t_mul(2, t_sym(n)))),
                   f_atom(a_cmp(CmpOp::Lt, t_mul(2, t_sym(n)),
                                t_add(t_mul(3, t_sym(t0)), t_num(3))))}));
  for (int64_t N = 1; N <= 9; ++N) {
    for (int64_t a = 0; a <= 9; ++a) {
      for (int64_t b = 0; b <= 9; ++b) {
        EvalCtx ctx;
        ctx.symEnv[n] = N;
        ctx.symEnv[u0] = a;
        ctx.symEnv[u1] = b;
        ctx.existsBound = 32;
        bool x = eval_formula(orig, ctx);
        bool y = eval_formula(des, ctx);
        REQUIRE_MESSAGE(x == y, "N=", N, " u0=", a, " u1=", b);
      }
    }
  }
}

TEST_CASE("boolean switch variables add a {0,1} invariant conjunct") {
  SystemSpec spec = th::load_spec(th::bench_path("ot/spec_irrev.cf"));
  REQUIRE(spec.invariantPhi.size() == 1);
  std::set<std::string> lits;
  for (const auto& lit : spec.invariantPhi[0].arithLits)
    lits.insert(print_formula(lit, spec.vocab.get()));
  CHECK(lits.count("0 <= S"));
  CHECK(lits.count("S <= 1"));
  CHECK(spec.transCases.size() == 18);
}

TEST_CASE("validate is total on parser output: classified errors only") {
  // a small battery of malformed specs must raise classified errors, never crash
  const char* bads[] = {
      // missing N
      "params: M;\nsorts: V2 = {a};\narrays: A : V2;\ncounters: c = #{k | A(k)=a};\n"
      "init: forall x . A(x)=a;\ntrans:\n  case A'(x)=A(x);\nunsafe: c > M;\n",
      // primed symbol in init
      "params: N;\nsorts: V2 = {a, b};\narrays: A : V2;\ncounters: c = #{k | A(k)=a};\n"
      "init: forall x . A'(x)=a;\ntrans:\n  case A'(x)=A(x);\nunsafe: c > N;\n",
      // data compared with <
      "params: N;\nsorts: V2 = {a, b};\narrays: A : V2;\ncounters: c = #{k | A(k)=a};\n"
      "init: forall x . A(x) < a;\ntrans:\n  case A'(x)=A(x);\nunsafe: c > N;\n",
      // mixing data and arithmetic under a disjunction inside one case
      "params: N;\nsorts: V2 = {a, b};\nintvars: w;\narrays: A : V2;\n"
      "counters: c = #{k | A(k)=a};\ninit: forall x . A(x)=a;\ntrans:\n"
      "  case (A'(x)=a | w > 0) & A'(x)=A(x);\nunsafe: c > N;\n",
  };
  for (const char* text : bads) {
    try {
      validate(parse_spec(text));
      FAIL_CHECK("expected a classified error for:\n", text);
    } catch (const Error&) {
      CHECK(true);
    } catch (...) {
      FAIL_CHECK("unclassified exception for:\n", text);
    }
  }
}
