#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rscatter {

/// Voronoi construction was handed co-located or no sites.
class DistinctSitesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A protocol was evaluated without a capability its guard depends on.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A decision function was called outside its precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Scenario rejected before any step runs. `field()` names the offending key
/// (e.g. "robots.sigma"); `line()` is 0 when the scenario was built in code.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message, std::size_t line = 0)
      : std::invalid_argument(render(field, message, line)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string render(const std::string& field, const std::string& message, std::size_t line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  std::size_t line_;
};

/// Malformed trace file.
class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& message)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Replay refused because the embedded scenario does not hash to the recorded digest.
class DigestMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol handed to the impossibility harness consumed random draws.
class NotDeterministicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rscatter
