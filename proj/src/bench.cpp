#include "ctrabs/bench.hpp"

#include "ctrabs/basics.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>

namespace ctrabs::bench {

namespace fs = std::filesystem;

const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names = {"ot",   "ot_buggy",   "srbp",
                                                 "srbp_buggy", "bbp", "bbp_buggy"};
  return names;
}

std::string default_bench_dir() {
  if (const char* env = std::getenv("CTRABS_BENCH_DIR")) return env;
  return "benchmarks";
}

BenchmarkFixture load_fixture(const std::string& name, const std::string& benchDir) {
  const auto& names = corpus();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrKind::UnknownBenchmark, "unknown benchmark '" + name + "'");
  BenchmarkFixture f;
  f.name = name;
  f.dir = (benchDir.empty() ? default_bench_dir() : benchDir) + "/" + name;
  f.specPath = f.dir + "/spec.cf";
  if (!fs::exists(f.specPath))
    fail(ErrKind::Io, "missing benchmark spec " + f.specPath);
  std::string propsPath = f.dir + "/properties.json";
  if (fs::exists(propsPath)) {
    nlohmann::json j = nlohmann::json::parse(read_file(propsPath));
    f.verifiedAgainstPaper = j.value("verified_against_paper", false);
    for (const auto& p : j.at("properties")) {
      Property prop;
      prop.name = p.at("name").get<std::string>();
      prop.bad = p.at("bad").get<std::string>();
      prop.strengthen = p.value("strengthen", "");
      prop.specFile = p.value("spec", "");
      prop.expected = p.value("expected", "");
      f.properties.push_back(std::move(prop));
    }
  }
  std::string expectedPath = f.dir + "/expected.json";
  if (fs::exists(expectedPath)) f.expectedPath = expectedPath;
  // only OT is fully specified in the source material
  if (f.expectedPath.empty() == false && name != "ot")
    fail(ErrKind::Config, "expected.json transcription is only verified for 'ot'");
  return f;
}

} // namespace ctrabs::bench
