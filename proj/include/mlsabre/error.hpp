#pragma once

#include <stdexcept>
#include <string>

namespace mlsabre {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed QASM or device text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// The instance cannot be laid out: too many program qubits, or a disconnected device.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlsabre
