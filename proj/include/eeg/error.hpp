#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eeg {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An eventuality whose populated roles do not match its pattern.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// A pattern pair outside the ten admissible entailment types.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed. Carries the 1-based line number (0 when
/// the error is not tied to a line).
class LoadError : public Error {
 public:
  LoadError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Persisted graph files are malformed or truncated.
class FormatError : public LoadError {
 public:
  using LoadError::LoadError;
};

/// Unknown eventuality or missing graph.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A scoring precondition was violated (e.g. zero frequency in the penalty).
class ScoringError : public Error {
 public:
  using Error::Error;
};

}  // namespace eeg
