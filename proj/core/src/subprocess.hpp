#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bugcast::detail {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

// Runs argv[0] with the given arguments, captures stdout/stderr.
// Throws InternalError when the process cannot be spawned.
CommandResult run_command(const std::vector<std::string>& argv);

// Long-lived child with a request/response pipe pair (e.g. `git cat-file
// --batch`). Writes requests to the child's stdin, reads from its stdout.
class PipeProcess {
 public:
  explicit PipeProcess(const std::vector<std::string>& argv);
  ~PipeProcess();

  PipeProcess(const PipeProcess&) = delete;
  PipeProcess& operator=(const PipeProcess&) = delete;

  void write_line(const std::string& line);
  // Reads until '\n' (consumed, not returned). Throws on EOF.
  std::string read_line();
  // Reads exactly n bytes.
  std::string read_exact(std::size_t n);

 private:
  int in_fd_ = -1;   // child's stdin (we write)
  int out_fd_ = -1;  // child's stdout (we read)
  long long pid_ = -1;
  std::string buffer_;

  void fill_buffer();
};

}  // namespace bugcast::detail
