#pragma once

#include <stdexcept>
#include <string>

namespace dnaevo {

// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  input = 2,    // malformed or inconsistent input data
  config = 3,   // invalid parameters or configuration
  guard = 4,    // runtime guard tripped (oracle size, strict-mode flags)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) { throw Error(ErrorKind::input, what); }
[[noreturn]] inline void fail_config(const std::string& what) { throw Error(ErrorKind::config, what); }
[[noreturn]] inline void fail_guard(const std::string& what) { throw Error(ErrorKind::guard, what); }

}  // namespace dnaevo
