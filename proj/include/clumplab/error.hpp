#pragma once

#include <stdexcept>
#include <string>

namespace clumplab {

enum class ErrorKind {
  invalid_argument,
  invalid_input,
  degenerate_input,
  divergent_log_integral,
  cannot_carve,
  invalid_weight,
  out_of_range,
  hypothesis_not_met,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace clumplab
