#include "spacex/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace spacex {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe(fds) != 0) throw_errno("pipe");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  int read_end() const { return fds[0]; }
  int write_end() const { return fds[1]; }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

std::vector<char*> build_argv(const std::vector<std::string>& argv) {
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  return cargv;
}

int wait_exit(int pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw_errno("waitpid");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& cwd,
                          const std::map<std::string, std::string>& extra_env,
                          const std::string& input) {
  if (argv.empty()) throw std::runtime_error("run_process: empty argv");
  Pipe in_pipe, out_pipe, err_pipe;

  const int pid = ::fork();
  if (pid < 0) throw_errno("fork");
  if (pid == 0) {
    ::dup2(in_pipe.read_end(), STDIN_FILENO);
    ::dup2(out_pipe.write_end(), STDOUT_FILENO);
    ::dup2(err_pipe.write_end(), STDERR_FILENO);
    in_pipe.close_read();
    in_pipe.close_write();
    out_pipe.close_read();
    out_pipe.close_write();
    err_pipe.close_read();
    err_pipe.close_write();
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(127);
    for (const auto& [k, v] : extra_env) ::setenv(k.c_str(), v.c_str(), 1);
    auto cargv = build_argv(argv);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }

  in_pipe.close_read();
  out_pipe.close_write();
  err_pipe.close_write();

  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) in_pipe.close_write();

  char buf[65536];
  while (true) {
    struct pollfd fds[3];
    int nfds = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (out_pipe.read_end() >= 0) {
      fds[nfds] = {out_pipe.read_end(), POLLIN, 0};
      out_idx = nfds++;
    }
    if (err_pipe.read_end() >= 0) {
      fds[nfds] = {err_pipe.read_end(), POLLIN, 0};
      err_idx = nfds++;
    }
    if (in_pipe.write_end() >= 0) {
      fds[nfds] = {in_pipe.write_end(), POLLOUT, 0};
      in_idx = nfds++;
    }
    if (nfds == 0) break;
    if (::poll(fds, nfds, -1) < 0) {
      if (errno == EINTR) continue;
      throw_errno("poll");
    }
    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP))) {
      const ssize_t n = ::read(out_pipe.read_end(), buf, sizeof(buf));
      if (n > 0)
        result.out.append(buf, static_cast<std::size_t>(n));
      else
        out_pipe.close_read();
    }
    if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP))) {
      const ssize_t n = ::read(err_pipe.read_end(), buf, sizeof(buf));
      if (n > 0)
        result.err.append(buf, static_cast<std::size_t>(n));
      else
        err_pipe.close_read();
    }
    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[in_idx].revents & (POLLERR | POLLHUP)) {
        in_pipe.close_write();
      } else {
        const ssize_t n =
            ::write(in_pipe.write_end(), input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (written >= input.size()) in_pipe.close_write();
      }
    }
  }

  result.exit_code = wait_exit(pid);
  return result;
}

BatchProcess::BatchProcess(const std::vector<std::string>& argv, const std::string& cwd) {
  if (argv.empty()) throw std::runtime_error("BatchProcess: empty argv");
  Pipe in_pipe, out_pipe;
  const int pid = ::fork();
  if (pid < 0) throw_errno("fork");
  if (pid == 0) {
    ::dup2(in_pipe.read_end(), STDIN_FILENO);
    ::dup2(out_pipe.write_end(), STDOUT_FILENO);
    in_pipe.close_read();
    in_pipe.close_write();
    out_pipe.close_read();
    out_pipe.close_write();
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(127);
    auto cargv = build_argv(argv);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  pid_ = pid;
  in_fd_ = in_pipe.write_end();
  out_fd_ = out_pipe.read_end();
  in_pipe.fds[1] = -1;
  out_pipe.fds[0] = -1;
}

BatchProcess::~BatchProcess() {
  if (!finished_) {
    close_stdin();
    if (out_fd_ >= 0) ::close(out_fd_);
    out_fd_ = -1;
    if (pid_ >= 0) wait_exit(pid_);
  }
}

void BatchProcess::write_line(const std::string& line) {
  std::string payload = line;
  payload.push_back('\n');
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n = ::write(in_fd_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write to child");
    }
    written += static_cast<std::size_t>(n);
  }
}

int BatchProcess::fill_buffer() {
  char buf[65536];
  const ssize_t n = ::read(out_fd_, buf, sizeof(buf));
  if (n < 0) {
    if (errno == EINTR) return fill_buffer();
    throw_errno("read from child");
  }
  if (n > 0) buf_.append(buf, static_cast<std::size_t>(n));
  return static_cast<int>(n);
}

bool BatchProcess::read_line(std::string& line) {
  while (true) {
    const auto nl = buf_.find('\n', buf_pos_);
    if (nl != std::string::npos) {
      line.assign(buf_, buf_pos_, nl - buf_pos_);
      buf_pos_ = nl + 1;
      if (buf_pos_ > (1u << 20)) {
        buf_.erase(0, buf_pos_);
        buf_pos_ = 0;
      }
      return true;
    }
    if (fill_buffer() == 0) {
      if (buf_pos_ < buf_.size()) {
        line.assign(buf_, buf_pos_, buf_.size() - buf_pos_);
        buf_pos_ = buf_.size();
        return true;
      }
      return false;
    }
  }
}

std::string BatchProcess::read_exact(std::size_t n) {
  while (buf_.size() - buf_pos_ < n) {
    if (fill_buffer() == 0)
      throw std::runtime_error("BatchProcess: unexpected EOF from child");
  }
  std::string out = buf_.substr(buf_pos_, n);
  buf_pos_ += n;
  if (buf_pos_ > (1u << 20)) {
    buf_.erase(0, buf_pos_);
    buf_pos_ = 0;
  }
  return out;
}

void BatchProcess::close_stdin() {
  if (in_fd_ >= 0) ::close(in_fd_);
  in_fd_ = -1;
}

int BatchProcess::finish() {
  close_stdin();
  while (fill_buffer() > 0) {
  }
  if (out_fd_ >= 0) ::close(out_fd_);
  out_fd_ = -1;
  exit_code_ = wait_exit(pid_);
  finished_ = true;
  return exit_code_;
}

}  // namespace spacex
