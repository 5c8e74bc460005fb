#include "pbtbench/util/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

namespace pbtbench::util {

namespace {

using Clock = std::chrono::steady_clock;

void append_capped(std::string& buf, const char* data, std::size_t n, std::size_t cap) {
  buf.append(data, n);
  if (buf.size() > cap) buf.erase(0, buf.size() - cap);
}

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw SpawnFailure(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    for (int f : fd) {
      if (f >= 0) ::close(f);
    }
  }
  void close_end(int i) {
    if (fd[i] >= 0) ::close(fd[i]);
    fd[i] = -1;
  }
};

}  // namespace

ProcessResult run_shell(const std::string& command, std::optional<double> timeout_s, const std::filesystem::path& cwd,
                        std::size_t max_output) {
  Pipe out, err;
  const auto start = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw SpawnFailure(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) _exit(126);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  // Set the group from both sides so killpg cannot race the child's setpgid.
  ::setpgid(pid, pid);
  out.close_end(1);
  err.close_end(1);

  ProcessResult r;
  const auto deadline =
      timeout_s ? std::optional(start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*timeout_s)))
                : std::nullopt;
  bool reaped = false;
  int status = 0;
  std::optional<Clock::time_point> drain_until;
  char buf[65536];

  auto reap = [&](int flags) {
    if (reaped) return;
    const pid_t w = ::waitpid(pid, &status, flags);
    if (w == pid) {
      reaped = true;
      r.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
      // Stray background children must not keep the pipes open.
      ::killpg(pid, SIGKILL);
      if (!drain_until) drain_until = Clock::now() + std::chrono::milliseconds(500);
    }
  };

  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    auto now = Clock::now();
    if (!reaped && deadline && now >= *deadline) {
      r.timed_out = true;
      ::killpg(pid, SIGKILL);
      reap(0);
      continue;
    }
    if (drain_until && now >= *drain_until) break;
    int wait_ms = 50;
    if (!reaped && deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - now).count() + 1;
      wait_ms = static_cast<int>(std::clamp<long long>(left, 0, 50));
    }
    pollfd fds[2];
    int nfds = 0;
    for (int f : {out.fd[0], err.fd[0]}) {
      if (f >= 0) fds[nfds++] = {f, POLLIN, 0};
    }
    const int rc = ::poll(fds, nfds, wait_ms);
    if (rc < 0 && errno != EINTR) break;
    for (int i = 0; i < nfds && rc > 0; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      const bool is_out = fds[i].fd == out.fd[0];
      if (n > 0) {
        append_capped(is_out ? r.out : r.err, buf, static_cast<std::size_t>(n), max_output);
      } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        (is_out ? out : err).close_end(0);
      }
    }
    reap(WNOHANG);
  }
  // Both streams closed; the child may still be running.
  while (!reaped) {
    if (deadline && Clock::now() >= *deadline) {
      r.timed_out = true;
      ::killpg(pid, SIGKILL);
      reap(0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    reap(WNOHANG);
  }

  if (WIFEXITED(status)) {
    r.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    r.signaled = true;
    r.signal = WTERMSIG(status);
  }
  return r;
}

}  // namespace pbtbench::util
