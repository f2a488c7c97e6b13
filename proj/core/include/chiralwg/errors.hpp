#pragma once

#include <stdexcept>
#include <string>

namespace chiralwg {

// Error categories map onto CLI exit codes: Config -> 1, Numeric -> 2, Io -> 3.
enum class ErrorKind { Config, Numeric, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
  throw Error(ErrorKind::Config, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::Numeric, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorKind::Io, msg);
}

}  // namespace chiralwg
