#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctrabs/bench.hpp"
#include "ctrabs/chc.hpp"
#include "ctrabs/oracle.hpp"
#include "ctrabs/parser.hpp"
#include "ctrabs/pipeline.hpp"
#include "ctrabs/print.hpp"
#include "ctrabs/subprocess.hpp"

#include "abs_eval.hpp"
#include "helpers.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>

using namespace ctrabs;
using namespace ctrabs::logic;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void verdict_line(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "ACCEPTANCE " << idx << " (" << name << "): " << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
}

Formula parse_abs(const std::string& text, const VocabPtr& vocab) {
  return front::resolve_abstract_formula(front::parse_expression(text), vocab, {}, true);
}

std::string solver_command() {
  if (const char* env = std::getenv("CTRABS_SOLVER")) return env;
  std::string probe = th::src_dir() + "/tools/z3horn.js";
  if (fs::exists(probe)) return "node " + fs::absolute(probe).string() + " {file}";
  return "";
}

struct OtExpected {
  Formula phi0, iota0, tauShared;
  std::vector<Formula> tauDisjuncts;
};

OtExpected load_ot_expected(const VocabPtr& vocab) {
  nlohmann::json j = nlohmann::json::parse(read_file(th::bench_path("ot/expected.json")));
  OtExpected e;
  e.phi0 = parse_abs(j.at("phi0").get<std::string>(), vocab);
  e.iota0 = parse_abs(j.at("iota0").get<std::string>(), vocab);
  e.tauShared = parse_abs(j.at("tau0").at("shared").get<std::string>(), vocab);
  for (const auto& d : j.at("tau0").at("disjuncts"))
    e.tauDisjuncts.push_back(parse_abs(d.get<std::string>(), vocab));
  return e;
}

} // namespace

TEST_CASE("criterion 1: OT abstraction equivalence with the transcription") {
  Timer timer;
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  oracle::CompiledCS ccs = oracle::compile_cs(cs);
  OtExpected exp = load_ot_expected(spec.vocab);

  // compile expected formulas over the CompiledCS slot layout
  th::FEval phiE, iotaE, sharedE;
  std::vector<th::FEval> disjE(exp.tauDisjuncts.size());
  phiE.set_root(exp.phi0, ccs.slot);
  iotaE.set_root(exp.iota0, ccs.slot);
  sharedE.set_root(exp.tauShared, ccs.slot);
  for (size_t i = 0; i < exp.tauDisjuncts.size(); ++i)
    disjE[i].set_root(exp.tauDisjuncts[i], ccs.slot);

  bool pass = true;
  std::string detail;
  uint64_t pairsChecked = 0;
  int P = ccs.nParams, I = ccs.nInts, C = ccs.nCtrs;
  REQUIRE(P == 1);
  REQUIRE(I == 0);
  REQUIRE(C == 6);

  // Phi0 must be top
  if (!(cs.phi0.size() == 1 && cs.phi0[0].cons.cons.empty())) {
    pass = false;
    detail = "generated Phi0 is not syntactically top";
  }

  for (int64_t N = 3; N <= 9 && pass; ++N) {
    auto tuples = oracle::simplex_tuples(6, N);
    std::vector<int64_t> slots(ccs.nSlots, 0);
    slots[0] = N;
    // iota0 over single tuples
    for (const auto& z : tuples) {
      for (int i = 0; i < C; ++i) slots[P + i] = z[i];
      ccs.fill_locals(slots);
      bool mine = false;
      for (const auto& d : ccs.iota0)
        if (ccs.eval_disjunct(d, slots)) {
          mine = true;
          break;
        }
      bool expd = iotaE.eval(slots);
      if (mine != expd) {
        pass = false;
        detail = "iota0 differs at N=" + std::to_string(N);
        break;
      }
      // Phi0 semantics: both top
      if (!phiE.eval(slots)) {
        pass = false;
        detail = "transcribed Phi0 not top?";
        break;
      }
    }
    // tau0 over tuple pairs
    for (size_t a = 0; a < tuples.size() && pass; ++a) {
      for (int i = 0; i < C; ++i) slots[P + i] = tuples[a][i];
      for (size_t b = 0; b < tuples.size(); ++b) {
        for (int i = 0; i < C; ++i) slots[P + C + i] = tuples[b][i];
        ccs.fill_locals(slots);
        bool mine = false;
        for (const auto& d : ccs.tau0)
          if (ccs.eval_disjunct(d, slots)) {
            mine = true;
            break;
          }
        bool expd = false;
        if (sharedE.eval(slots)) {
          for (const auto& d : disjE)
            if (d.eval(slots)) {
              expd = true;
              break;
            }
        }
        ++pairsChecked;
        if (mine != expd) {
          pass = false;
          std::ostringstream os;
          os << "tau0 differs at N=" << N << " pre=(";
          for (int i = 0; i < C; ++i) os << (i ? "," : "") << tuples[a][i];
          os << ") post=(";
          for (int i = 0; i < C; ++i) os << (i ? "," : "") << tuples[b][i];
          os << ") mine=" << mine << " paper=" << expd;
          detail = os.str();
          break;
        }
      }
    }
  }
  std::ostringstream od;
  od << pairsChecked << " pairs, " << (int)timer.ms() << " ms" << (detail.empty() ? "" : "; ")
     << detail;
  verdict_line(1, "OT abstraction equivalence", pass && timer.ms() < 120000, od.str());
  CHECK(pass);
  CHECK(timer.ms() < 120000);
}

TEST_CASE("criterion 2: simulation soundness at N=3,4") {
  Timer timer;
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  oracle::Options opts;
  bool pass = true;
  std::ostringstream detail;
  for (int64_t n : {3, 4}) {
    oracle::SimulationReport rep = oracle::check_simulation(spec, cs, n, opts);
    detail << "N=" << n << ": " << rep.concreteStateCount << " states, "
           << rep.concreteTransitionCount << " transitions; ";
    if (!rep.simulationHolds) {
      pass = false;
      for (const auto& c : rep.counterexamples) detail << c.detail << "; ";
    }
    CHECK(rep.simulationHolds);
  }
  detail << (int)timer.ms() << " ms";
  verdict_line(2, "simulation soundness", pass && timer.ms() < 300000, detail.str());
  CHECK(timer.ms() < 300000);
}

TEST_CASE("criterion 3: strongest abstraction at N=3,4") {
  Timer timer;
  auto spec = th::ot_spec();
  pipe::CounterSystem cs = pipe::build_counter_system(spec);
  oracle::Options opts;
  bool pass = true;
  std::ostringstream detail;
  for (int64_t n : {3, 4}) {
    oracle::SimulationReport rep = oracle::check_strongest(spec, cs, n, opts);
    detail << "N=" << n << " skipped=" << rep.skippedTuples << "; ";
    if (!rep.strongestHolds) {
      pass = false;
      for (const auto& c : rep.counterexamples) detail << c.detail << "; ";
    }
    CHECK(rep.strongestHolds);
  }
  detail << (int)timer.ms() << " ms";
  verdict_line(3, "strongest abstraction", pass && timer.ms() < 600000, detail.str());
  CHECK(timer.ms() < 600000);
}

TEST_CASE("criterion 4: safety verdicts through the external Horn solver") {
  std::string solver = solver_command();
  if (solver.empty()) {
    std::cout << "ACCEPTANCE 4 (safety verdicts): SKIP — no external Horn solver installed "
                 "(set CTRABS_SOLVER or npm install -g z3-solver)"
              << std::endl;
    return;
  }
  Timer total;
  bool pass = true;
  std::ostringstream detail;
  auto runOne = [&](const std::string& fixtureName, const bench::Property& prop,
                    const std::string& specPath, bool enforce) {
    Timer t;
    auto spec = th::load_spec(specPath);
    pipe::CounterSystem cs = pipe::build_counter_system(spec);
    Formula bad = prop.bad.empty() ? spec.safetyBad
                                   : front::resolve_arith_formula(
                                         front::parse_expression(prop.bad), spec.vocab);
    Formula strengthen =
        prop.strengthen.empty()
            ? nullptr
            : front::resolve_arith_formula(front::parse_expression(prop.strengthen), spec.vocab);
    chc::HornProblem hp = chc::emit_horn(cs, bad, strengthen, "");
    std::string out = "accept_" + fixtureName + "_" + prop.name + ".smt2";
    write_file(out, hp.text);
    auto argv = solver_argv(solver, out);
    RunResult r = run_command(argv, 120);
    std::string verdict = "unknown";
    if (!r.timedOut && !r.startFailed) {
      std::istringstream is(r.out);
      std::string w;
      while (is >> w)
        if (w == "sat" || w == "unsat" || w == "unknown") {
          verdict = w;
          break;
        }
    }
    double totalMs = t.ms();
    detail << fixtureName << "/" << prop.name << "=" << verdict << " (" << (int)totalMs
           << " ms) ";
    if (enforce) {
      bool ok = verdict == prop.expected && totalMs < 60000;
      if (!ok) pass = false;
      CHECK_MESSAGE(verdict == prop.expected, fixtureName, "/", prop.name, " expected ",
                    prop.expected, " got ", verdict);
      CHECK_MESSAGE(totalMs < 60000, fixtureName, "/", prop.name, " too slow");
    }
  };

  bench::BenchmarkFixture ot = bench::load_fixture("ot", th::src_dir() + "/benchmarks");
  for (const auto& prop : ot.properties) {
    std::string specPath = prop.specFile.empty() ? ot.specPath : ot.dir + "/" + prop.specFile;
    runOne("ot", prop, specPath, true);
  }
  bench::BenchmarkFixture otb = bench::load_fixture("ot_buggy", th::src_dir() + "/benchmarks");
  for (const auto& prop : otb.properties) runOne("ot_buggy", prop, otb.specPath, true);
  // SRBP/BBP rows run but are informational (fixtures unverified)
  for (const std::string name : {"srbp", "srbp_buggy", "bbp", "bbp_buggy"}) {
    bench::BenchmarkFixture fx = bench::load_fixture(name, th::src_dir() + "/benchmarks");
    for (const auto& prop : fx.properties) {
      std::string specPath = prop.specFile.empty() ? fx.specPath : fx.dir + "/" + prop.specFile;
      runOne(name, prop, specPath, false);
    }
  }
  verdict_line(4, "safety verdicts", pass, detail.str() + "total " +
                                              std::to_string((int)total.ms()) + " ms");
  CHECK(pass);
}

TEST_CASE("criterion 5: solver-independent bounded reachability") {
  Timer timer;
  bool pass = true;
  std::ostringstream detail;
  bench::BenchmarkFixture ot = bench::load_fixture("ot", th::src_dir() + "/benchmarks");
  for (const auto& prop : ot.properties) {
    std::string specPath = prop.specFile.empty() ? ot.specPath : ot.dir + "/" + prop.specFile;
    auto spec = th::load_spec(specPath);
    pipe::CounterSystem cs = pipe::build_counter_system(spec);
    Formula bad =
        front::resolve_arith_formula(front::parse_expression(prop.bad), spec.vocab);
    Formula strengthen =
        prop.strengthen.empty()
            ? nullptr
            : front::resolve_arith_formula(front::parse_expression(prop.strengthen), spec.vocab);
    oracle::Options opts;
    for (int64_t n = 3; n <= 6; ++n) {
      oracle::ReachResult rr = oracle::bounded_reach(cs, n, bad, strengthen, opts);
      if (rr.reachable) {
        pass = false;
        detail << "ot/" << prop.name << " reachable at N=" << n << "! ";
      }
      CHECK_FALSE(rr.reachable);
    }
    detail << "ot/" << prop.name << "=Unreachable(3..6) ";
  }
  // buggy agreement must be reachable at some N <= 6
  auto buggy = th::load_spec(th::bench_path("ot_buggy/spec.cf"));
  pipe::CounterSystem bcs = pipe::build_counter_system(buggy);
  bool reachable = false;
  for (int64_t n = 3; n <= 6 && !reachable; ++n) {
    oracle::ReachResult rr = oracle::bounded_reach(bcs, n, buggy.safetyBad, nullptr, {});
    reachable = rr.reachable;
    if (reachable) detail << "ot_buggy/agreement Reachable at N=" << n << " ";
  }
  if (!reachable) pass = false;
  CHECK(reachable);
  detail << (int)timer.ms() << " ms";
  verdict_line(5, "bounded reachability fallback", pass && timer.ms() < 120000, detail.str());
  CHECK(timer.ms() < 120000);
}

TEST_CASE("criterion 6: randomized Presburger QE suite") {
  Timer timer;
  Sym sx{SymKind::IntVar, "x", false}, sy{SymKind::IntVar, "y", false},
      sz{SymKind::IntVar, "z", false};
  std::mt19937 rng(1234567);
  auto pick = [&](int n) { return (int)(rng() % (unsigned)n); };
  int count = 0;
  bool pass = true;
  for (int inst = 0; inst < 1000; ++inst) {
    qe::ConSet c;
    std::vector<Sym> pool = {sx, sy, sz};
    int nsyms = 1 + pick(3);
    int ncons = 1 + pick(5);
    std::set<Sym> used;
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
        int coeff = pick(7) - 3;
        if (coeff == 0) coeff = 1;
        lc.lin.add_coeff(pool[pick(nsyms)], coeff);
      }
      lc.lin.k = pick(11) - 5;
      if (!lc.lin.c.empty()) {
        for (const auto& [s, v] : lc.lin.c) used.insert(s);
        c.cons.push_back(std::move(lc));
      }
    }
    if (!c.mentions(sx)) {
      LinCon lc;
      lc.k = LinCon::K::Le;
      lc.lin.add_coeff(sx, 1 + pick(3));
      lc.lin.k = pick(7) - 3;
      c.cons.push_back(lc);
      used.insert(sx);
    }
    used.erase(sx);
    std::vector<Sym> freeSyms(used.begin(), used.end());

    auto exact = qe::eliminate_int_var(sx, c, qe::Policy::Exact);
    qe::ConSet relaxed = qe::fm_real(sx, c);
    std::vector<int64_t> vals(freeSyms.size(), -20);
    for (;;) {
      std::map<Sym, Int> env;
      for (size_t i = 0; i < freeSyms.size(); ++i) env[freeSyms[i]] = vals[i];
      bool expect = th::brute_exists(c, sx, env);
      bool got = qe::eval_consets(exact.sets, env);
      if (expect != got) pass = false;
      REQUIRE(expect == got);
      if (got) {
        qe::ConSets one;
        one.sets.push_back(relaxed);
        bool rel = qe::eval_consets(one, env);
        if (!rel) pass = false;
        REQUIRE(rel); // cooper implies fm_real
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
    ++count;
  }
  std::ostringstream detail;
  detail << count << " instances, " << (int)timer.ms() << " ms";
  verdict_line(6, "Presburger QE property suite", pass && count >= 1000 && timer.ms() < 60000,
               detail.str());
  CHECK(count >= 1000);
  CHECK(timer.ms() < 60000);
}

TEST_CASE("criterion 7: byte-identical builds across the corpus") {
  Timer timer;
  bool pass = true;
  std::ostringstream detail;
  int files = 0;
  for (const auto& name : bench::corpus()) {
    bench::BenchmarkFixture fx = bench::load_fixture(name, th::src_dir() + "/benchmarks");
    std::set<std::string> specs = {fx.specPath};
    for (const auto& prop : fx.properties)
      if (!prop.specFile.empty()) specs.insert(fx.dir + "/" + prop.specFile);
    for (const auto& path : specs) {
      auto once = [&] {
        auto spec = th::load_spec(path);
        pipe::CounterSystem cs = pipe::build_counter_system(spec);
        chc::HornProblem hp = chc::emit_horn(cs, spec.safetyBad, nullptr, "determinism probe");
        return std::make_pair(hp.text, pipe::counter_system_dump(cs));
      };
      auto [h1, j1] = once();
      auto [h2, j2] = once();
      if (h1 != h2 || j1 != j2) {
        pass = false;
        detail << path << " differs! ";
      }
      CHECK(h1 == h2);
      CHECK(j1 == j2);
      ++files;
    }
  }
  detail << files << " spec files, " << (int)timer.ms() << " ms";
  verdict_line(7, "determinism", pass, detail.str());
}

TEST_CASE("criterion 8: invariance discipline of the generated systems") {
  Timer timer;
  bool pass = true;
  std::ostringstream detail;
  for (const auto& name : bench::corpus()) {
    bench::BenchmarkFixture fx = bench::load_fixture(name, th::src_dir() + "/benchmarks");
    std::set<std::string> specs = {fx.specPath};
    for (const auto& prop : fx.properties)
      if (!prop.specFile.empty()) specs.insert(fx.dir + "/" + prop.specFile);
    for (const auto& path : specs) {
      auto spec = th::load_spec(path);
      pipe::CounterSystem cs = pipe::build_counter_system(spec);
      oracle::CompiledCS ccs = oracle::compile_cs(cs);
      bool hasF = spec.vocab->params.size() > 1;
      bool plainOt = path.find("ot/spec.cf") != std::string::npos;
      int64_t nHi = plainOt ? 9 : 6; // the criterion-1 grid for OT, a smaller one elsewhere
      auto ivDomains = oracle::abstract_intvar_domains(cs);
      int P = ccs.nParams, I = ccs.nInts, C = ccs.nCtrs;
      int pbase = P + I + C;
      auto evalAny = [&](const std::vector<oracle::CompiledCS::CDisj>& ds,
                         std::vector<int64_t>& slots) {
        ccs.fill_locals(slots);
        for (const auto& d : ds)
          if (ccs.eval_disjunct(d, slots)) return true;
        return false;
      };
      for (int64_t N = 3; N <= nHi && pass; ++N) {
        std::vector<int64_t> fvals;
        if (hasF) {
          for (int64_t f = 0; 3 * f < N; ++f) fvals.push_back(f);
        } else {
          fvals.push_back(-1);
        }
        auto tuples = oracle::simplex_tuples(C, N);
        std::vector<std::vector<int64_t>> ivs{{}};
        for (size_t i = 0; i < ivDomains.size(); ++i) {
          std::vector<std::vector<int64_t>> next;
          for (const auto& base : ivs)
            for (int64_t v : ivDomains[i]) {
              auto copy = base;
              copy.push_back(v);
              next.push_back(std::move(copy));
            }
          ivs = std::move(next);
        }
        std::vector<int64_t> slots(ccs.nSlots, 0);
        for (int64_t f : fvals) {
          for (int i = 0; i < P; ++i)
            slots[i] = cs.params[i].name == "N" ? N : f;
          // collect Phi0 states once, then check both entailments
          std::vector<std::pair<const std::vector<int64_t>*, const std::vector<int64_t>*>> good;
          for (const auto& z : tuples) {
            for (const auto& iv : ivs) {
              for (int i = 0; i < I; ++i) slots[P + i] = iv[i];
              for (int i = 0; i < C; ++i) slots[P + I + i] = z[i];
              bool phi = evalAny(ccs.phi0, slots);
              if (evalAny(ccs.iota0, slots) && !phi) {
                pass = false;
                detail << path << ": iota0 tuple outside Phi0 at N=" << N << " ";
              }
              if (phi) good.push_back({&z, &iv});
            }
          }
          for (const auto& [za, iva] : good) {
            for (int i = 0; i < I; ++i) slots[P + i] = (*iva)[i];
            for (int i = 0; i < C; ++i) slots[P + I + i] = (*za)[i];
            // post side ranges over all tuples; Phi0' must hold whenever tau0 fires
            for (const auto& z2 : tuples) {
              for (const auto& iv2 : ivs) {
                for (int i = 0; i < I; ++i) slots[pbase + i] = iv2[i];
                for (int i = 0; i < C; ++i) slots[pbase + I + i] = z2[i];
                ccs.fill_locals(slots);
                bool fired = false;
                for (const auto& d : ccs.tau0)
                  if (ccs.eval_disjunct(d, slots)) {
                    fired = true;
                    break;
                  }
                if (!fired) continue;
                // evaluate Phi0 on the post tuple
                std::vector<int64_t> post(ccs.nSlots, 0);
                for (int i = 0; i < P; ++i) post[i] = slots[i];
                for (int i = 0; i < I; ++i) post[P + i] = iv2[i];
                for (int i = 0; i < C; ++i) post[P + I + i] = z2[i];
                if (!evalAny(ccs.phi0, post)) {
                  pass = false;
                  detail << path << ": Phi0/tau0 escapes Phi0' at N=" << N << " ";
                }
              }
              if (!pass) break;
            }
            if (!pass) break;
          }
        }
      }
      CHECK_MESSAGE(pass, path);
      if (!pass) break;
    }
    if (!pass) break;
  }
  detail << (int)timer.ms() << " ms";
  verdict_line(8, "eq(1) discipline", pass, detail.str());
}
