#pragma once

#include <string>
#include <vector>

namespace ctrabs {

struct RunResult {
  int exitCode = -1;
  bool timedOut = false;
  bool startFailed = false;
  std::string out;
};

// argv[0] resolved via PATH; captures stdout (stderr devnull); kills the
// child on timeout
RunResult run_command(const std::vector<std::string>& argv, int timeoutSeconds);

// whitespace-split command template with {file} substituted; appends the file
// path when no placeholder occurs
std::vector<std::string> solver_argv(const std::string& cmdTemplate, const std::string& file);

} // namespace ctrabs
