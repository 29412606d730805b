#pragma once

#include <stdexcept>
#include <string>

namespace torusflow {

/// Raised for contract violations on inputs (bad dimensions, overflow,
/// duplicate frequencies, out-of-range parameters).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an external file (JSON/CSV) cannot be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace torusflow
