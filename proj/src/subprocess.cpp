#include "ctrabs/subprocess.hpp"

#include <chrono>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace ctrabs {

std::vector<std::string> solver_argv(const std::string& cmdTemplate, const std::string& file) {
  std::vector<std::string> argv;
  std::istringstream is(cmdTemplate);
  std::string word;
  bool substituted = false;
  while (is >> word) {
    size_t at = word.find("{file}");
    if (at != std::string::npos) {
      word.replace(at, 6, file);
      substituted = true;
    }
    argv.push_back(word);
  }
  if (!substituted) argv.push_back(file);
  return argv;
}

RunResult run_command(const std::vector<std::string>& argv, int timeoutSeconds) {
  RunResult res;
  int outPipe[2];
  if (pipe(outPipe) != 0) {
    res.startFailed = true;
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(outPipe[0]);
    close(outPipe[1]);
    res.startFailed = true;
    return res;
  }
  if (pid == 0) {
    close(outPipe[0]);
    dup2(outPipe[1], 1);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, 2);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }
  close(outPipe[1]);
  fcntl(outPipe[0], F_SETFL, O_NONBLOCK);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeoutSeconds);
  int status = 0;
  bool done = false;
  while (!done) {
    char buf[4096];
    ssize_t n;
    while ((n = read(outPipe[0], buf, sizeof buf)) > 0) res.out.append(buf, (size_t)n);
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) {
      done = true;
      break;
    }
    if (std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.timedOut = true;
      done = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  char buf[4096];
  ssize_t n;
  while ((n = read(outPipe[0], buf, sizeof buf)) > 0) res.out.append(buf, (size_t)n);
  close(outPipe[0]);
  if (!res.timedOut) {
    if (WIFEXITED(status)) {
      res.exitCode = WEXITSTATUS(status);
      if (res.exitCode == 127) res.startFailed = true;
    } else {
      res.exitCode = -1;
    }
  }
  return res;
}

} // namespace ctrabs
