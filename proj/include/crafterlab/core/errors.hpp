#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace crafterlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration. `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Operation not permitted in the current lifecycle state (closed session,
// non-monotone record, act after expiry).
class StateError : public Error {
 public:
  using Error::Error;
};

class EpisodeOverError : public StateError {
 public:
  EpisodeOverError() : StateError("episode is over; reset before stepping") {}
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A quantity that is mathematically undefined for its input (entropy of zero
// counts, mean of an empty curve).
class UndefinedInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + (field.empty() ? "" : " field '" + field + "'") +
              ": " + what),
        line_(line),
        field_(std::move(field)),
        message_(what) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }
  // The message without the line and field prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string field_;
  std::string message_;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// The classifier response carried no Finish[k] token.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

}  // namespace crafterlab
