#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polis {

// Base for everything the toolkit throws on bad input data. The CLI maps it
// to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single malformed corpus record.
class RecordError : public DataError {
 public:
  RecordError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input outside an operation's domain (density of a one-node graph, TDL with
// a single unique word, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace polis
