#ifndef MLNCC_ERRORS_HPP
#define MLNCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlncc {

// Base of every error raised by the library. The CLI maps all of these to
// exit code 2 (validation); anything else is an internal error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Two graphs/summaries disagree on the vertex count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Requested edge count cannot be realized as a simple graph.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlncc

#endif  // MLNCC_ERRORS_HPP
