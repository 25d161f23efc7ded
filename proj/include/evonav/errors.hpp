#pragma once

#include <stdexcept>

namespace evonav {

// Base class for all workbench errors; the CLI maps subtypes to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or malformed input file.
struct ConfigError : Error {
  using Error::Error;
};

// Operation called outside its domain (pose outside arena, speed over limit, ...).
struct DomainError : Error {
  using Error::Error;
};

// Genome/parameter shape mismatch.
struct CodecError : Error {
  using Error::Error;
};

// Experiment harness misuse (unevaluated population, impossible start poses, ...).
struct HarnessError : Error {
  using Error::Error;
};

// Filesystem failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace evonav
