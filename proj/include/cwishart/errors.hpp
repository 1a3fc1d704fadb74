#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwishart {

/// Precondition violated by the caller (bad dimension, parameter out of range).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix that must be Hermitian positive (semi-)definite is not.
class NotPsdError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed textual input (pattern specs, ranges, CSV files).
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          message_(what), line_(line), column_(column) {}

    /// The message without the position suffix.
    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace cwishart
