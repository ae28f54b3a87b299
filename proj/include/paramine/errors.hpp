#pragma once

#include <stdexcept>
#include <string>

namespace paramine {

// Bad argument values or contract violations (maps to CLI exit 1).
class ArgumentError : public std::runtime_error {
 public:
  explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unusable input data (maps to CLI exit 2).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public DataError {
 public:
  explicit IoError(const std::string& msg) : DataError(msg) {}
};

}  // namespace paramine
