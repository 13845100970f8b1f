#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vforge {

// Base class for every error the toolkit raises on purpose.  Callers that
// only want "did it work" can catch this; callers that route failures to
// different exit paths catch the concrete types below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument fed to a pure function is outside its domain
// (normalized coordinate out of [0,1], non-positive span, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A parameter struct violates one of its documented invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Mesh construction or interrogation failed: too few sections, mismatched
// point counts, non-monotone stations, a volume query on an open shell, or
// a part that cannot fit its mate.
class MeshError : public Error {
 public:
  using Error::Error;
};

// STL byte stream could not be parsed.  Carries the offset of the first
// byte that could not be consumed.
class StlParseError : public Error {
 public:
  StlParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Hydrodynamic evaluation cannot proceed: degenerate operating point or a
// load state the stress model does not cover.
class EvalError : public Error {
 public:
  using Error::Error;
};

// Optimizer configuration is unusable (start point outside bounds, bad
// bound ordering, non-positive budget options, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A control frame did not parse to a known command.
class CommandParseError : public Error {
 public:
  using Error::Error;
};

// A PWM trace is malformed or too short to measure.
class TraceError : public Error {
 public:
  using Error::Error;
};

// A design spec cannot be planned (missing fields, unsatisfiable
// constraints) or a plan file is malformed.
class PlanningError : public Error {
 public:
  using Error::Error;
};

// An override directive names an unknown path or carries a bad value.
class OverrideError : public Error {
 public:
  using Error::Error;
};

}  // namespace vforge
