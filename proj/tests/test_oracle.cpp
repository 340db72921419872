#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctrabs/oracle.hpp"
#include "ctrabs/print.hpp"

#include "helpers.hpp"

using namespace ctrabs;
using namespace ctrabs::logic;
using namespace ctrabs::oracle;

namespace {

front::SystemSpec identity_spec() {
  std::string text = R"(params: N;
sorts: Val = {v0, v1}; Acc = {b0, b1, b2};
arrays: V : Val; A : Acc;
counters:
  z0 = #{k | V(k)=v0};
  z1 = #{k | V(k)=v1};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x) & A'(x)=A(x);
unsafe: z0 > N;
)";
  return front::validate(front::parse_spec(text));
}

} // namespace

TEST_CASE("enumerate_states: OT at N=3 has 216 configurations") {
  auto spec = th::ot_spec();
  Options opts;
  auto states = enumerate_states(spec, 3, opts);
  CHECK(states.size() == 216); // 2^3 * 3^3; R0, R1 are trimmed
  // deterministic order
  auto again = enumerate_states(spec, 3, opts);
  CHECK(states == again);
}

TEST_CASE("enumerate_states: trivial cases") {
  std::string text = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";
  auto spec = front::validate(front::parse_spec(text));
  Options opts;
  CHECK(enumerate_states(spec, 1, opts).size() == 2);

  std::string phiFalse = R"(params: N;
sorts: Val = {v0, v1};
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
invariant: forall x . 0 > 1;
init: forall x . V(x)=v0;
trans:
  case V'(x)=V(x);
unsafe: c0 > N;
)";
  auto spec2 = front::validate(front::parse_spec(phiFalse));
  CHECK(enumerate_states(spec2, 2, opts).empty());
}

TEST_CASE("project_state") {
  auto spec = th::ot_spec();
  ConcreteState s;
  s.n = 3;
  s.params["N"] = 3;
  s.arrs.resize(4);
  s.arrs[0] = {0, 0, 1}; // V = v0,v0,v1
  s.arrs[1] = {0, 0, 0}; // A = bot,bot,bot
  auto z = project_state(spec, s);
  // declaration order: z00, z10, zb0, z01, z11, zb1
  CHECK(z == std::vector<int64_t>{0, 0, 2, 0, 0, 1});

  ConcreteState allb;
  allb.n = 4;
  allb.params["N"] = 4;
  allb.arrs.resize(4);
  allb.arrs[0] = {0, 0, 0, 0};
  allb.arrs[1] = {0, 0, 0, 0};
  auto z2 = project_state(spec, allb);
  CHECK(z2 == std::vector<int64_t>{0, 0, 4, 0, 0, 0});

  // partition law: counters sum to N on every enumerated state
  Options opts;
  for (const auto& st : enumerate_states(spec, 3, opts)) {
    auto zz = project_state(spec, st);
    int64_t sum = 0;
    for (int64_t v : zz) sum += v;
    CHECK(sum == 3);
  }
}

TEST_CASE("enumerate_transitions: identity frame gives the diagonal") {
  auto spec = identity_spec();
  Options opts;
  auto states = enumerate_states(spec, 2, opts);
  uint64_t count = 0, diagonal = 0;
  enumerate_transitions(spec, 2, opts, [&](const ConcreteState& a, const ConcreteState& b) {
    count++;
    if (a == b) diagonal++;
  });
  CHECK(count == states.size());
  CHECK(diagonal == count);
}

TEST_CASE("enumerate_transitions: OT at N=3 is nonempty; all-false tau is empty") {
  auto spec = th::ot_spec();
  Options opts;
  uint64_t count = 0;
  enumerate_transitions(spec, 3, opts,
                        [&](const ConcreteState&, const ConcreteState&) { count++; });
  CHECK(count > 0);

  std::string falseTau = R"(params: N;
sorts: Val = {v0, v1};
intvars: w;
arrays: V : Val;
counters: c0 = #{k | V(k)=v0};
init: forall x . w = 0 & V(x)=v0;
trans:
  case w > 0 & w < 0 & V'(x)=V(x) & w' = w;
unsafe: c0 > N;
)";
  auto spec2 = front::validate(front::parse_spec(falseTau));
  uint64_t none = 0;
  enumerate_transitions(spec2, 2, opts,
                        [&](const ConcreteState&, const ConcreteState&) { none++; });
  CHECK(none == 0);
}

TEST_CASE("check_simulation: OT at N=3 and a broken abstraction") {
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  SimulationReport rep = check_simulation(spec, cs, 3, opts);
  CHECK(rep.simulationHolds);
  CHECK(rep.concreteStateCount == 216);
  CHECK(rep.concreteTransitionCount > 0);

  pipe::CounterSystem broken = cs;
  broken.tau0.clear(); // tau0 = false against a nonempty transition relation
  SimulationReport rep2 = check_simulation(spec, broken, 3, opts);
  CHECK_FALSE(rep2.simulationHolds);
  CHECK(!rep2.counterexamples.empty());
}

TEST_CASE("check_simulation: vacuous on a spec with no transitions") {
  std::string falseTau = R"(params: N;
sorts: Val = {v0, v1};
intvars: w;
arrays: V : Val;
counters: c0 = #{k | V(k)=v0}; c1 = #{k | V(k)=v1};
init: forall x . w = 0 & V(x)=v0;
trans:
  case w > 0 & w < 0 & V'(x)=V(x) & w' = w;
unsafe: c0 > N;
)";
  auto spec = front::validate(front::parse_spec(falseTau));
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  SimulationReport rep = check_simulation(spec, cs, 2, opts);
  CHECK(rep.simulationHolds);
  CHECK(rep.concreteTransitionCount == 0);
}

TEST_CASE("check_strongest: OT at N=3; mutation is caught") {
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  SimulationReport rep = check_strongest(spec, cs, 3, opts);
  CHECK(rep.strongestHolds);

  // weaken one disjunct by dropping a mixed-prime conjunct; the exhaustive
  // witness search must find an unmatched abstract pair
  bool caught = false;
  for (size_t d = 0; d < cs.tau0.size() && !caught; ++d) {
    for (size_t k = 0; k < cs.tau0[d].cons.cons.size() && !caught; ++k) {
      const auto& con = cs.tau0[d].cons.cons[k];
      bool hasPrimed = false, hasUnprimed = false;
      for (const auto& [s, c] : con.lin.c) {
        if (s.kind == SymKind::Counter) (s.primed ? hasPrimed : hasUnprimed) = true;
      }
      if (!hasPrimed || !hasUnprimed) continue;
      pipe::CounterSystem mut = cs;
      mut.tau0[d].cons.cons.erase(mut.tau0[d].cons.cons.begin() + k);
      SimulationReport r2 = check_strongest(spec, mut, 3, opts);
      if (!r2.strongestHolds) caught = true;
    }
  }
  CHECK(caught);
}

TEST_CASE("check_strongest: vacuous on empty tau0") {
  auto spec = identity_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  cs.tau0.clear();
  Options opts;
  SimulationReport rep = check_strongest(spec, cs, 2, opts);
  CHECK(rep.strongestHolds);
}

TEST_CASE("bounded_reach: OT agreement unreachable, init itself reachable") {
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  Formula bad = spec.safetyBad;
  for (int64_t n : {3, 4}) {
    ReachResult rr = bounded_reach(cs, n, bad, nullptr, opts);
    CHECK_FALSE(rr.reachable);
  }
  // bad == one of iota0's own facts: reachable with an empty trace
  Formula iotaFact =
      f_atom(a_cmp(CmpOp::Eq, t_sym({SymKind::Counter, "z00", false}), t_num(0)));
  ReachResult rr = bounded_reach(cs, 3, iotaFact, nullptr, opts);
  CHECK(rr.reachable);
  CHECK(rr.trace.size() == 1);
}

TEST_CASE("bounded_reach: weak validity under the strengthened init") {
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  Formula bad = front::resolve_arith_formula(front::parse_expression("z10 + z11 > 0"), spec.vocab);
  Formula strengthen =
      front::resolve_arith_formula(front::parse_expression("zb0 = N"), spec.vocab);
  for (int64_t n : {3, 4}) {
    ReachResult rr = bounded_reach(cs, n, bad, strengthen, opts);
    CHECK_FALSE(rr.reachable);
  }
}

TEST_CASE("bounded_reach: buggy OT reaches agreement violation; trace replays") {
  auto spec = th::load_spec(th::bench_path("ot_buggy/spec.cf"));
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  Formula bad = spec.safetyBad;
  bool foundSomewhere = false;
  for (int64_t n = 3; n <= 6 && !foundSomewhere; ++n) {
    ReachResult rr = bounded_reach(cs, n, bad, nullptr, opts);
    if (!rr.reachable) continue;
    foundSomewhere = true;
    // BFS soundness: the witness trace replays step by step
    CompiledCS ccs = compile_cs(cs);
    REQUIRE(!rr.trace.empty());
    CHECK(ccs.eval_state(ccs.iota0, n, {}, rr.trace.front()));
    for (size_t i = 0; i + 1 < rr.trace.size(); ++i)
      CHECK(ccs.eval_pair(n, {}, rr.trace[i], rr.trace[i + 1]));
  }
  CHECK(foundSomewhere);
}

TEST_CASE("check_equiv_bounded") {
  Sym p{SymKind::IntVar, "p", false}, q{SymKind::IntVar, "q", false};
  Formula fp = f_atom(a_cmp(CmpOp::Lt, t_num(0), t_sym(p)));
  Formula fq = f_atom(a_cmp(CmpOp::Lt, t_num(0), t_sym(q)));
  Grid g;
  g.ranges = {{p, -3, 3}, {q, -3, 3}};
  CHECK(check_equiv_bounded(f_and({fp, fq}), f_and({fq, fp}), g).equivalent);
  Sym z{SymKind::Counter, "z", false};
  Formula ge = f_atom(a_cmp(CmpOp::Le, t_num(0), t_sym(z)));
  Formula gt = f_atom(a_cmp(CmpOp::Lt, t_num(0), t_sym(z)));
  Grid gz;
  gz.ranges = {{z, -2, 2}};
  auto res = check_equiv_bounded(ge, gt, gz);
  CHECK_FALSE(res.equivalent);
  CHECK(res.counterexample.at(z) == 0);
}

TEST_CASE("simulation report serialization") {
  auto spec = identity_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  Options opts;
  SimulationReport rep = check_simulation(spec, cs, 2, opts);
  std::string j = rep.to_json();
  CHECK(j.find("\"checkedN\": 2") != std::string::npos);
  CHECK(j.find("simulationHolds") != std::string::npos);
  CHECK(rep.to_text().find("N=2") != std::string::npos);
}
