#include "ctrabs/bench.hpp"
#include "ctrabs/chc.hpp"
#include "ctrabs/oracle.hpp"
#include "ctrabs/parser.hpp"
#include "ctrabs/pipeline.hpp"
#include "ctrabs/print.hpp"
#include "ctrabs/subprocess.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ctrabs;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  size_t atoms = 24;
  size_t cells = 4096;
  size_t qeBudget = 5000;
  bool relax = false;
  std::string benchDir;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--atoms", c.atoms, "all-SAT atom alphabet budget");
  cmd->add_option("--cells", c.cells, "cell-space budget");
  cmd->add_option("--qe-budget", c.qeBudget, "atom budget per disjunct before fm fallback");
  cmd->add_flag("--relax", c.relax, "allow the Fourier-Motzkin real relaxation fallback");
}

pipe::Budgets budgets_of(const CommonOpts& c) {
  pipe::Budgets b;
  b.atoms = c.atoms;
  b.cells = c.cells;
  b.qeRelax = c.qeBudget;
  return b;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

front::SystemSpec load_spec(const std::string& path) {
  std::string text = read_file(path);
  return front::validate(front::parse_spec(text));
}

// property selection: properties.json next to the spec file
struct PropertyChoice {
  std::string specPath; // possibly redirected by the property
  logic::Formula bad;
  logic::Formula strengthen; // may be null
  std::string name;
  std::string expected;
};

PropertyChoice choose_property(const std::string& specPath, const std::string& propName,
                               const std::string& unsafeExpr, const std::string& strengthenExpr) {
  PropertyChoice pc;
  pc.specPath = specPath;
  std::string dir = fs::path(specPath).parent_path().string();
  bench::Property prop;
  bool haveProp = false;
  if (!propName.empty()) {
    std::string propsPath = dir + "/properties.json";
    if (!fs::exists(propsPath))
      fail(ErrKind::Config, "--prop given but no properties.json next to " + specPath);
    nlohmann::json j = nlohmann::json::parse(read_file(propsPath));
    for (const auto& p : j.at("properties")) {
      if (p.at("name").get<std::string>() == propName) {
        prop.name = propName;
        prop.bad = p.at("bad").get<std::string>();
        prop.strengthen = p.value("strengthen", "");
        prop.specFile = p.value("spec", "");
        prop.expected = p.value("expected", "");
        haveProp = true;
      }
    }
    if (!haveProp) fail(ErrKind::Config, "no property named '" + propName + "'");
    if (!prop.specFile.empty()) pc.specPath = dir + "/" + prop.specFile;
    pc.name = prop.name;
    pc.expected = prop.expected;
  }
  front::SystemSpec spec = load_spec(pc.specPath);
  if (!unsafeExpr.empty())
    pc.bad = front::resolve_arith_formula(front::parse_expression(unsafeExpr), spec.vocab);
  else if (haveProp)
    pc.bad = front::resolve_arith_formula(front::parse_expression(prop.bad), spec.vocab);
  else
    pc.bad = spec.safetyBad;
  std::string strengthenSrc = !strengthenExpr.empty() ? strengthenExpr : prop.strengthen;
  if (!strengthenSrc.empty())
    pc.strengthen =
        front::resolve_arith_formula(front::parse_expression(strengthenSrc), spec.vocab);
  return pc;
}

std::string horn_header(const pipe::CounterSystem& cs) {
  std::ostringstream os;
  os << "ctrabs " << kVersion << "\n";
  os << "spec-hash: " << std::hex << std::setw(16) << std::setfill('0') << cs.specHash << std::dec
     << "\n";
  os << "exact: " << (cs.exact ? "true" : "false") << "\n";
  os << "stats: cases=" << cs.stats.cases << " atoms=" << cs.stats.atoms
     << " assignments=" << cs.stats.assignments << " survivor-sets=" << cs.stats.survivorSets
     << " cells=" << cs.stats.cells << " disjuncts=" << cs.stats.disjuncts
     << " pruned-unsat=" << cs.stats.prunedUnsat;
  return os.str();
}

void print_stats(const pipe::CounterSystem& cs, double buildMs) {
  std::cout << "cases: " << cs.stats.cases << ", atoms: " << cs.stats.atoms
            << ", assignments: " << cs.stats.assignments
            << ", survivor sets: " << cs.stats.survivorSets << ", cells: " << cs.stats.cells
            << "\ndisjuncts: phi0=" << cs.phi0.size() << " iota0=" << cs.iota0.size()
            << " tau0=" << cs.tau0.size() << " (pruned " << cs.stats.prunedUnsat
            << " unsat), exact: " << (cs.exact ? "true" : "false") << "\n";
  for (const auto& [name, body] : cs.autoCounters)
    std::cout << "auto-declared counter " << name << " = " << body << "\n";
  std::cout << "build time: " << std::fixed << std::setprecision(1) << buildMs << " ms\n";
}

std::string default_solver() {
  if (const char* env = std::getenv("CTRABS_SOLVER")) return env;
  std::vector<std::string> probes = {"tools/z3horn.js"};
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    probes.push_back((exe.parent_path() / "tools/z3horn.js").string());
    probes.push_back((exe.parent_path().parent_path() / "tools/z3horn.js").string());
  }
  for (const auto& p : probes)
    if (fs::exists(p)) return "node " + fs::absolute(p).string() + " {file}";
  return "";
}

std::string parse_verdict(const std::string& out) {
  std::istringstream is(out);
  std::string word;
  while (is >> word)
    if (word == "sat" || word == "unsat" || word == "unknown") return word;
  return "";
}

struct SolveOutcome {
  std::string verdict; // sat/unsat/unknown/timeout
  double solveMs = 0;
};

SolveOutcome run_solver(const std::string& solverCmd, const std::string& file, int timeoutSec) {
  SolveOutcome so;
  auto argv = solver_argv(solverCmd, file);
  auto t0 = std::chrono::steady_clock::now();
  RunResult r = run_command(argv, timeoutSec);
  so.solveMs = ms_since(t0);
  if (r.startFailed)
    fail(ErrKind::SolverNotFound, "cannot run solver command '" + solverCmd + "'");
  if (r.timedOut) {
    so.verdict = "timeout";
    return so;
  }
  so.verdict = parse_verdict(r.out);
  if (so.verdict.empty())
    fail(ErrKind::UnparseableVerdict, "no sat/unsat/unknown in solver output: " + r.out);
  return so;
}

int classify_exit(const Error& e) {
  switch (e.kind) {
    case ErrKind::SolverNotFound:
    case ErrKind::SolverTimeout:
    case ErrKind::UnparseableVerdict:
    case ErrKind::Io:
    case ErrKind::Internal: return 3;
    default: return 2;
  }
}

std::map<std::string, int64_t> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, int64_t> out;
  for (const auto& kv : kvs) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrKind::Config, "--param expects name=value, got " + kv);
    out[kv.substr(0, eq)] = std::stoll(kv.substr(eq + 1));
  }
  return out;
}

struct BuildArtifacts {
  front::SystemSpec spec;
  pipe::CounterSystem cs;
  PropertyChoice prop;
  double buildMs = 0;
};

BuildArtifacts do_build(const std::string& input, const CommonOpts& common,
                        const std::string& propName, const std::string& unsafeExpr,
                        const std::string& strengthenExpr) {
  BuildArtifacts ba;
  ba.prop = choose_property(input, propName, unsafeExpr, strengthenExpr);
  ba.spec = load_spec(ba.prop.specPath);
  auto t0 = std::chrono::steady_clock::now();
  ba.cs = pipe::build_counter_system(ba.spec, budgets_of(common), common.relax);
  ba.buildMs = ms_since(t0);
  return ba;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctrabs " + std::string(kVersion) +
               " - compiles declarative parameterized-protocol specifications to their "
               "strongest counter abstraction and emits constrained-Horn-clause safety problems"};
  app.require_subcommand(1);

  // build
  auto* cmdBuild = app.add_subcommand("build", "compile a spec and emit the HORN problem");
  std::string inPath, outPath, propName, unsafeExpr, strengthenExpr;
  bool emitJson = false;
  CommonOpts commonBuild;
  cmdBuild->add_option("input", inPath, "spec file (.cf)")->required();
  cmdBuild->add_option("-o,--output", outPath, "output .smt2 path");
  cmdBuild->add_option("--prop", propName, "property name from properties.json");
  cmdBuild->add_option("--unsafe", unsafeExpr, "ad-hoc bad-state formula");
  cmdBuild->add_option("--strengthen", strengthenExpr, "extra init conjunct");
  cmdBuild->add_flag("--emit-json", emitJson, "also dump the CounterSystem JSON");
  add_common(cmdBuild, commonBuild);

  // solve
  auto* cmdSolve = app.add_subcommand("solve", "build, then run the external Horn solver");
  std::string sInPath, sOutPath, sPropName, sUnsafe, sStrengthen, solverCmd;
  int timeoutSec = 60;
  CommonOpts commonSolve;
  cmdSolve->add_option("input", sInPath, "spec file (.cf)")->required();
  cmdSolve->add_option("-o,--output", sOutPath, "output .smt2 path");
  cmdSolve->add_option("--prop", sPropName, "property name from properties.json");
  cmdSolve->add_option("--unsafe", sUnsafe, "ad-hoc bad-state formula");
  cmdSolve->add_option("--strengthen", sStrengthen, "extra init conjunct");
  cmdSolve->add_option("--solver", solverCmd, "solver command, {file} substituted");
  cmdSolve->add_option("--timeout", timeoutSec, "solver timeout in seconds")
      ->check(CLI::PositiveNumber);
  add_common(cmdSolve, commonSolve);

  // check
  auto* cmdCheck = app.add_subcommand("check", "explicit-state oracle checks at fixed N");
  std::string cInPath, injectPath;
  std::vector<int64_t> checkNs;
  std::vector<std::string> cParams;
  bool cJson = false, skipStrongest = false;
  CommonOpts commonCheck;
  cmdCheck->add_option("input", cInPath, "spec file (.cf)")->required();
  cmdCheck->add_option("--n", checkNs, "process counts to check (repeatable)")->required();
  cmdCheck->add_option("--param", cParams, "parameter value name=value (repeatable)");
  cmdCheck->add_option("--inject-abstraction", injectPath,
                       "check a CounterSystem JSON instead of the generated one");
  cmdCheck->add_flag("--json", cJson, "print reports as JSON");
  cmdCheck->add_flag("--no-strongest", skipStrongest, "run only the simulation direction");
  add_common(cmdCheck, commonCheck);

  // reach
  auto* cmdReach = app.add_subcommand(
      "reach", "solver-independent bounded reachability over the abstraction");
  std::string rInPath, rProp, rUnsafe, rStrengthen;
  std::vector<int64_t> reachNs;
  std::vector<std::string> rParams;
  CommonOpts commonReach;
  cmdReach->add_option("input", rInPath, "spec file (.cf)")->required();
  cmdReach->add_option("--n", reachNs, "process counts (repeatable)")->required();
  cmdReach->add_option("--param", rParams, "parameter value name=value (repeatable)");
  cmdReach->add_option("--prop", rProp, "property name from properties.json");
  cmdReach->add_option("--unsafe", rUnsafe, "ad-hoc bad-state formula");
  cmdReach->add_option("--strengthen", rStrengthen, "extra init conjunct");
  add_common(cmdReach, commonReach);

  // bench
  auto* cmdBench = app.add_subcommand("bench", "run the benchmark corpus");
  std::string bSolver, bCsv, bDir;
  int bTimeout = 60;
  bool bNoSolve = false;
  CommonOpts commonBench;
  cmdBench->add_option("--solver", bSolver, "solver command, {file} substituted");
  cmdBench->add_flag("--no-solve", bNoSolve, "build-only rows, skip the solver");
  cmdBench->add_option("--timeout", bTimeout, "solver timeout in seconds");
  cmdBench->add_option("--csv", bCsv, "also write the table as CSV");
  cmdBench->add_option("--bench-dir", bDir, "benchmark corpus directory");
  add_common(cmdBench, commonBench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmdBuild) {
      BuildArtifacts ba = do_build(inPath, commonBuild, propName, unsafeExpr, strengthenExpr);
      std::string out = outPath.empty()
                            ? fs::path(ba.prop.specPath).stem().string() + ".smt2"
                            : outPath;
      chc::HornProblem hp =
          chc::emit_horn(ba.cs, ba.prop.bad, ba.prop.strengthen, horn_header(ba.cs));
      write_file(out, hp.text);
      std::cout << "wrote " << out << "\n";
      if (emitJson) {
        std::string jsonOut = fs::path(out).replace_extension(".json").string();
        write_file(jsonOut, pipe::counter_system_dump(ba.cs));
        std::cout << "wrote " << jsonOut << "\n";
      }
      print_stats(ba.cs, ba.buildMs);
      return 0;
    }

    if (*cmdSolve) {
      std::string cmd = solverCmd.empty() ? default_solver() : solverCmd;
      if (cmd.empty())
        fail(ErrKind::SolverNotFound,
             "no solver configured (--solver, CTRABS_SOLVER, or tools/z3horn.js)");
      BuildArtifacts ba = do_build(sInPath, commonSolve, sPropName, sUnsafe, sStrengthen);
      std::string out = sOutPath.empty()
                            ? fs::path(ba.prop.specPath).stem().string() + ".smt2"
                            : sOutPath;
      chc::HornProblem hp =
          chc::emit_horn(ba.cs, ba.prop.bad, ba.prop.strengthen, horn_header(ba.cs));
      write_file(out, hp.text);
      SolveOutcome so = run_solver(cmd, out, timeoutSec);
      if (so.verdict == "timeout")
        fail(ErrKind::SolverTimeout,
             "solver exceeded " + std::to_string(timeoutSec) + "s on " + out);
      std::string meaning = so.verdict == "sat"     ? "SAFE (invariant found)"
                            : so.verdict == "unsat" ? "POSSIBLY UNSAFE (abstraction reaches bad)"
                                                    : "UNKNOWN";
      std::cout << so.verdict << ": " << meaning << "\n";
      std::cout << std::fixed << std::setprecision(1) << "build " << ba.buildMs << " ms, solve "
                << so.solveMs << " ms, total " << (ba.buildMs + so.solveMs) << " ms\n";
      return 0;
    }

    if (*cmdCheck) {
      for (int64_t n : checkNs)
        if (n < 1) fail(ErrKind::Config, "--n values must be at least 1");
      front::SystemSpec spec = load_spec(cInPath);
      pipe::CounterSystem cs =
          injectPath.empty()
              ? pipe::build_counter_system(spec, budgets_of(commonCheck), commonCheck.relax)
              : pipe::counter_system_load(read_file(injectPath), spec);
      oracle::Options opts;
      opts.params = parse_params(cParams);
      bool simOk = true, strongOk = true;
      for (int64_t n : checkNs) {
        oracle::SimulationReport sim = oracle::check_simulation(spec, cs, n, opts);
        oracle::SimulationReport strong;
        if (!skipStrongest && cs.exact) {
          strong = oracle::check_strongest(spec, cs, n, opts);
          sim.strongestHolds = strong.strongestHolds;
          sim.skippedTuples = strong.skippedTuples;
          for (const auto& c : strong.counterexamples) sim.counterexamples.push_back(c);
        }
        simOk = simOk && sim.simulationHolds;
        strongOk = strongOk && sim.strongestHolds;
        std::cout << (cJson ? sim.to_json() : sim.to_text()) << "\n";
      }
      return (simOk && strongOk) ? 0 : 1;
    }

    if (*cmdReach) {
      for (int64_t n : reachNs)
        if (n < 1) fail(ErrKind::Config, "--n values must be at least 1");
      PropertyChoice pc = choose_property(rInPath, rProp, rUnsafe, rStrengthen);
      front::SystemSpec spec = load_spec(pc.specPath);
      pipe::CounterSystem cs =
          pipe::build_counter_system(spec, budgets_of(commonReach), commonReach.relax);
      oracle::Options opts;
      opts.params = parse_params(rParams);
      for (int64_t n : reachNs) {
        oracle::ReachResult rr = oracle::bounded_reach(cs, n, pc.bad, pc.strengthen, opts);
        if (rr.reachable) {
          std::cout << "N=" << n << ": Reachable, trace length " << rr.trace.size() << ":";
          for (const auto& a : rr.trace) std::cout << " " << a.str();
          std::cout << "\n";
        } else {
          std::cout << "N=" << n << ": Unreachable (" << rr.statesExplored
                    << " abstract states explored)\n";
        }
      }
      return 0;
    }

    if (*cmdBench) {
      std::string cmd = bSolver.empty() ? default_solver() : bSolver;
      bool solving = !cmd.empty() && !bNoSolve;
      std::ostringstream csv;
      csv << "benchmark,property,build_ms,solve_ms,total_ms,verdict,exact\n";
      bool mismatch = false;
      std::cout << std::left << std::setw(12) << "benchmark" << std::setw(16) << "property"
                << std::setw(10) << "build_ms" << std::setw(10) << "solve_ms" << std::setw(10)
                << "total_ms" << std::setw(9) << "verdict" << "expected\n";
      for (const auto& name : bench::corpus()) {
        bench::BenchmarkFixture fx = bench::load_fixture(name, bDir);
        for (const auto& prop : fx.properties) {
          std::string specPath =
              prop.specFile.empty() ? fx.specPath : fx.dir + "/" + prop.specFile;
          double buildMs = 0, solveMs = 0;
          std::string verdict = "-";
          bool exact = true;
          try {
            BuildArtifacts ba = do_build(fx.specPath, commonBench, prop.name, "", "");
            buildMs = ba.buildMs;
            exact = ba.cs.exact;
            chc::HornProblem hp =
                chc::emit_horn(ba.cs, ba.prop.bad, ba.prop.strengthen, horn_header(ba.cs));
            std::string out = fx.name + "_" + prop.name + ".smt2";
            write_file(out, hp.text);
            if (solving) {
              SolveOutcome so = run_solver(cmd, out, bTimeout);
              solveMs = so.solveMs;
              verdict = so.verdict;
              if (!prop.expected.empty() && verdict != prop.expected) mismatch = true;
            }
          } catch (const Error& e) {
            verdict = std::string("error:") + err_kind_name(e.kind);
            mismatch = true;
          }
          std::ostringstream b1, s1, t1;
          b1 << std::fixed << std::setprecision(1) << buildMs;
          s1 << std::fixed << std::setprecision(1) << solveMs;
          t1 << std::fixed << std::setprecision(1) << (buildMs + solveMs);
          std::cout << std::left << std::setw(12) << fx.name << std::setw(16) << prop.name
                    << std::setw(10) << b1.str() << std::setw(10) << s1.str() << std::setw(10)
                    << t1.str() << std::setw(9) << verdict
                    << (prop.expected.empty() ? "-" : prop.expected) << "\n";
          csv << fx.name << "," << prop.name << "," << b1.str() << "," << s1.str() << ","
              << t1.str() << "," << verdict << "," << (exact ? "true" : "false") << "\n";
          (void)specPath;
        }
      }
      if (!bCsv.empty()) write_file(bCsv, csv.str());
      return mismatch ? 1 : 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return classify_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
