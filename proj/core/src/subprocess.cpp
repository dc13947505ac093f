#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>

#include "bugcast/errors.hpp"

namespace bugcast::detail {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw InternalError(what + ": " + std::strerror(errno));
}

std::vector<char*> to_exec_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  out.reserve(argv.size() + 1);
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
  if (argv.empty()) throw InternalError("run_command: empty argv");

  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0) throw_errno("pipe");
  if (pipe(err_pipe) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw_errno("pipe");
  }

  pid_t pid = fork();
  if (pid < 0) throw_errno("fork");
  if (pid == 0) {
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    auto exec_argv = to_exec_argv(argv);
    execvp(exec_argv[0], exec_argv.data());
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);

  CommandResult result;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  bool open_fd[2] = {true, true};
  char buf[65536];

  while (open_fd[0] || open_fd[1]) {
    if (poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fd[i] || fds[i].revents == 0) continue;
      ssize_t n = read(fds[i].fd, buf, sizeof(buf));
      if (n > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EINTR)) {
        open_fd[i] = false;
        fds[i].fd = -1;
      }
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  if (result.exit_code == 127 && result.out.empty()) {
    throw InternalError("cannot execute: " + argv[0]);
  }
  return result;
}

PipeProcess::PipeProcess(const std::vector<std::string>& argv) {
  if (argv.empty()) throw InternalError("PipeProcess: empty argv");

  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0) throw_errno("pipe");
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw_errno("pipe");
  }

  pid_t pid = fork();
  if (pid < 0) throw_errno("fork");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    auto exec_argv = to_exec_argv(argv);
    execvp(exec_argv[0], exec_argv.data());
    _exit(127);
  }

  close(to_child[0]);
  close(from_child[1]);
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
  pid_ = pid;
}

PipeProcess::~PipeProcess() {
  if (in_fd_ >= 0) close(in_fd_);
  if (out_fd_ >= 0) close(out_fd_);
  if (pid_ > 0) {
    int status = 0;
    while (waitpid(static_cast<pid_t>(pid_), &status, 0) < 0 && errno == EINTR) {
    }
  }
}

void PipeProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = write(in_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write to child");
    }
    off += static_cast<std::size_t>(n);
  }
}

void PipeProcess::fill_buffer() {
  char buf[65536];
  ssize_t n;
  do {
    n = read(out_fd_, buf, sizeof(buf));
  } while (n < 0 && errno == EINTR);
  if (n < 0) throw_errno("read from child");
  if (n == 0) throw InternalError("child process closed its output");
  buffer_.append(buf, static_cast<std::size_t>(n));
}

std::string PipeProcess::read_line() {
  std::size_t pos;
  while ((pos = buffer_.find('\n')) == std::string::npos) fill_buffer();
  std::string line = buffer_.substr(0, pos);
  buffer_.erase(0, pos + 1);
  return line;
}

std::string PipeProcess::read_exact(std::size_t n) {
  while (buffer_.size() < n) fill_buffer();
  std::string data = buffer_.substr(0, n);
  buffer_.erase(0, n);
  return data;
}

}  // namespace bugcast::detail
