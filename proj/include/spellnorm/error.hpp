#pragma once

#include <stdexcept>
#include <string>

namespace spellnorm {

// Base class for all library errors. The CLI maps the two branches of
// this hierarchy onto its exit codes: usage/IO problems exit 2, domain
// failures (training, evaluation) exit 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad flags, missing required inputs, unsupported option values.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input data (bad UTF-8, wrong column count, ...).
class ParseError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failures.
class IoError : public Error {
public:
  using Error::Error;
};

// A backend could not be trained from the given data.
class TrainError : public Error {
public:
  using Error::Error;
};

// Inconsistent evaluation inputs (length mismatches, vocabulary mismatches).
class EvalError : public Error {
public:
  using Error::Error;
};

}  // namespace spellnorm
