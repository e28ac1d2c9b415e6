#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdag {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance text. `location` is "line L, column C" for syntax
/// problems and a JSON path such as "nodes[3].wcet" for field problems.
class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kUnknownField, kType, kReference };

  ParseError(Kind kind, std::string location, const std::string& message)
      : Error(location + ": " + message), kind_(kind), location_(std::move(location)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& location() const noexcept { return location_; }

 private:
  Kind kind_;
  std::string location_;
};

/// The instance is not a well-formed p-DAG (see `validate`).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would visit more scenarios than the configured cap allows.
class ScenarioCapExceeded : public Error {
 public:
  ScenarioCapExceeded(std::uint64_t count, std::uint64_t cap)
      : Error("scenario count " + std::to_string(count) + " exceeds cap " + std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t count_;
  std::uint64_t cap_;
};

/// No admissible answer exists (e.g. no core count meets the deadline).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A distribution comparison needs a baseline with positive area.
class ZeroAreaError : public Error {
 public:
  using Error::Error;
};

/// Bad generator or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdag
