#pragma once

#include <string>
#include <vector>

namespace ctrabs::bench {

struct Property {
  std::string name;
  std::string bad;        // DSL expression over counters/intvars/params
  std::string strengthen; // optional init strengthening
  std::string specFile;   // optional alternate spec file within the fixture dir
  std::string expected;   // "sat", "unsat" or "" (informational)
};

struct BenchmarkFixture {
  std::string name;
  std::string dir;
  std::string specPath;
  bool verifiedAgainstPaper = false;
  std::vector<Property> properties;
  std::string expectedPath; // expected.json when present, else ""
};

// fixed corpus order
const std::vector<std::string>& corpus();

std::string default_bench_dir();
BenchmarkFixture load_fixture(const std::string& name, const std::string& benchDir = "");

} // namespace ctrabs::bench
