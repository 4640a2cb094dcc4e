#ifndef GRAPHVEC_ERROR_HPP_
#define GRAPHVEC_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphvec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or missing dataset input. `line()` is 0 when no line applies.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared in a loss or a model row.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::uint64_t step = 0)
      : Error(what), step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

class InferenceError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

/// Persisted artifact has the wrong magic, version or shape.
class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphvec

#endif  // GRAPHVEC_ERROR_HPP_
