#ifndef NETALIGN_ERRORS_H_
#define NETALIGN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netalign {

// Malformed or inconsistent input data (files, labels, correspondences).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text parse failure; carries the 1-based line number of the offending line.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Training or linear algebra produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netalign

#endif  // NETALIGN_ERRORS_H_
