// Copyright 2026 The Mutabench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mutabench/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace mutabench {

namespace {

void set_nonblocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

RunResult run_process(const std::vector<std::string>& argv,
                      const std::string& stdin_data, double timeout_s) {
  RunResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    return result;
  }

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    result.spawn_failed = true;
    return result;
  }

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    result.spawn_failed = true;
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]}) {
      close(fd);
    }
    return result;
  }

  if (pid == 0) {
    // Child: own process group so a timeout kill reaps grandchildren too.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]}) {
      close(fd);
    }
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }

  setpgid(pid, pid);  // also from the parent, to close the race
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  set_nonblocking(in_pipe[1]);
  set_nonblocking(out_pipe[0]);
  set_nonblocking(err_pipe[0]);
  signal(SIGPIPE, SIG_IGN);

  size_t written = 0;
  int stdin_fd = in_pipe[1];
  int stdout_fd = out_pipe[0];
  int stderr_fd = err_pipe[0];
  bool killed = false;

  auto deadline = start + std::chrono::duration_cast<
                              std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(timeout_s));

  while (stdout_fd >= 0 || stderr_fd >= 0 || stdin_fd >= 0) {
    auto now = std::chrono::steady_clock::now();
    if (!killed && now >= deadline) {
      kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
    }
    int wait_ms = killed
                      ? 100
                      : static_cast<int>(
                            std::chrono::duration_cast<std::chrono::milliseconds>(
                                deadline - now)
                                .count()) +
                            1;
    if (wait_ms < 1) wait_ms = 1;
    if (wait_ms > 200) wait_ms = 200;

    struct pollfd fds[3];
    int nfds = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (stdin_fd >= 0) {
      idx_in = nfds;
      fds[nfds++] = {stdin_fd, POLLOUT, 0};
    }
    if (stdout_fd >= 0) {
      idx_out = nfds;
      fds[nfds++] = {stdout_fd, POLLIN, 0};
    }
    if (stderr_fd >= 0) {
      idx_err = nfds;
      fds[nfds++] = {stderr_fd, POLLIN, 0};
    }
    int rc = poll(fds, nfds, wait_ms);
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;

    if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
        close(stdin_fd);
        stdin_fd = -1;
      } else {
        ssize_t n = write(stdin_fd, stdin_data.data() + written,
                          stdin_data.size() - written);
        if (n > 0) written += static_cast<size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) {
          close(stdin_fd);
          stdin_fd = -1;
        } else if (written == stdin_data.size()) {
          close(stdin_fd);
          stdin_fd = -1;
        }
      }
    }
    char buf[8192];
    auto drain = [&](int* fd, std::string* sink, int idx) {
      if (idx < 0 || *fd < 0) return;
      if (!(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
      while (true) {
        ssize_t n = read(*fd, buf, sizeof buf);
        if (n > 0) {
          sink->append(buf, static_cast<size_t>(n));
          continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
        close(*fd);
        *fd = -1;
        return;
      }
    };
    drain(&stdout_fd, &result.stdout_text, idx_out);
    drain(&stderr_fd, &result.stderr_text, idx_err);
  }
  if (stdin_fd >= 0) close(stdin_fd);

  int status = 0;
  // Output pipes are closed; the child is exiting or already dead. Enforce
  // the deadline while reaping in case it ignores stdio.
  while (true) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    if (!killed && std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
    }
    usleep(5000);
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  result.wall_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return result;
}

}  // namespace mutabench
