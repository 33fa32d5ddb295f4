#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ssnkit {

enum class ErrorKind {
  EmptyInput,
  Parse,
  Alphabet,
  Config,
  Stratify,
  MerSize,
  NeighborCount,
  Io,
  Schema,
  Connectivity,
  Dimension,
  Divergence,
  UndefinedMetric,
  MissingScores,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Alphabet: return "AlphabetError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Stratify: return "StratifyError";
    case ErrorKind::MerSize: return "MerSizeError";
    case ErrorKind::NeighborCount: return "NeighborCountError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Connectivity: return "ConnectivityError";
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::Divergence: return "DivergenceError";
    case ErrorKind::UndefinedMetric: return "UndefinedMetric";
    case ErrorKind::MissingScores: return "MissingScores";
  }
  return "Error";
}

/// Base of every exception thrown by the library. `kind()` is stable and is
/// what the CLI maps to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
 public:
  explicit KindError(const std::string& what) : Error(K, what) {}
};

using EmptyInputError = KindError<ErrorKind::EmptyInput>;
using AlphabetError = KindError<ErrorKind::Alphabet>;
using ConfigError = KindError<ErrorKind::Config>;
using StratifyError = KindError<ErrorKind::Stratify>;
using MerSizeError = KindError<ErrorKind::MerSize>;
using NeighborCountError = KindError<ErrorKind::NeighborCount>;
using IoError = KindError<ErrorKind::Io>;
using SchemaError = KindError<ErrorKind::Schema>;
using ConnectivityError = KindError<ErrorKind::Connectivity>;
using DimensionError = KindError<ErrorKind::Dimension>;
using DivergenceError = KindError<ErrorKind::Divergence>;
using UndefinedMetricError = KindError<ErrorKind::UndefinedMetric>;
using MissingScoresError = KindError<ErrorKind::MissingScores>;

class ParseError : public KindError<ErrorKind::Parse> {
 public:
  ParseError(std::size_t line, const std::string& what)
      : KindError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ssnkit
