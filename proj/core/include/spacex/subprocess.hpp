#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace spacex {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

/// Runs argv[0] with execvp (no shell), optionally in `cwd` with extra
/// environment variables, feeding `input` to stdin and capturing both
/// output streams. Throws std::runtime_error on spawn failure.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& cwd = {},
                          const std::map<std::string, std::string>& extra_env = {},
                          const std::string& input = {});

/// Interactive child process for request/response batch protocols
/// (e.g. `git cat-file --batch`). Writes are flushed immediately;
/// reads block until satisfied.
class BatchProcess {
public:
  BatchProcess(const std::vector<std::string>& argv, const std::string& cwd = {});
  ~BatchProcess();

  BatchProcess(const BatchProcess&) = delete;
  BatchProcess& operator=(const BatchProcess&) = delete;

  void write_line(const std::string& line);
  /// Reads one LF-terminated line (LF stripped). Returns false on EOF.
  bool read_line(std::string& line);
  /// Reads exactly n bytes.
  std::string read_exact(std::size_t n);
  void close_stdin();
  /// Waits for exit; returns exit code.
  int finish();

private:
  int fill_buffer();

  int pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buf_;
  std::size_t buf_pos_ = 0;
  int exit_code_ = -1;
  bool finished_ = false;
};

}  // namespace spacex
