#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace mw {

// Failure categories. The CLI maps them onto process exit codes:
// usage -> 1, data -> 2, runtime -> 3 (success is 0).
enum class ErrorKind { usage, data, runtime };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Caller misuse: bad arguments, invalid configuration, violated preconditions.
class UsageError : public Error {
public:
  explicit UsageError(std::string message) : Error(ErrorKind::usage, std::move(message)) {}
};

// Malformed or missing input data: unreadable files, bad headers, empty datasets.
class DataError : public Error {
public:
  explicit DataError(std::string message) : Error(ErrorKind::data, std::move(message)) {}
};

// Environment or internal failures: unwritable outputs, diverging training runs.
class RuntimeError : public Error {
public:
  explicit RuntimeError(std::string message) : Error(ErrorKind::runtime, std::move(message)) {}
};

// A video payload ended mid-frame. Carries the index of the frame that
// could not be completed so callers can report where the file broke off.
class TruncationError : public DataError {
public:
  TruncationError(std::string message, std::int64_t frame_index)
      : DataError(std::move(message)), frame_index_(frame_index) {}

  std::int64_t frame_index() const noexcept { return frame_index_; }

private:
  std::int64_t frame_index_;
};

// A video produced no usable activity samples, so no motion representation
// can be formed for it.
class EmptyActivityError : public DataError {
public:
  explicit EmptyActivityError(std::string message) : DataError(std::move(message)) {}
};

}  // namespace mw
