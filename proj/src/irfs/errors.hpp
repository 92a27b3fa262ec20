#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irfs {

/// Error identity. The category of a code decides the process exit status
/// the CLI reports (2 config, 3 data, 4 runtime).
enum class Errc {
  Config,
  Parse,
  Schema,
  Label,
  Split,
  EmptyInput,
  LengthMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  Range,
  EmptyFeatureSet,
  ShapeMismatch,
  InsufficientSamples,
  NonFiniteLoss,
  Io,
};

enum class ErrorCategory { Config = 2, Data = 3, Runtime = 4 };

constexpr ErrorCategory category_of(Errc code) {
  switch (code) {
    case Errc::Config:
      return ErrorCategory::Config;
    case Errc::Parse:
    case Errc::Schema:
    case Errc::Label:
    case Errc::Split:
    case Errc::Io:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Runtime;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

template <Errc Code>
class ErrorOf : public Error {
 public:
  explicit ErrorOf(const std::string& what) : Error(Code, what) {}
};

using ConfigError = ErrorOf<Errc::Config>;
using SchemaError = ErrorOf<Errc::Schema>;
using LabelError = ErrorOf<Errc::Label>;
using SplitError = ErrorOf<Errc::Split>;
using EmptyInput = ErrorOf<Errc::EmptyInput>;
using LengthMismatch = ErrorOf<Errc::LengthMismatch>;
using DimensionMismatch = ErrorOf<Errc::DimensionMismatch>;
using IndexOutOfRange = ErrorOf<Errc::IndexOutOfRange>;
using RangeError = ErrorOf<Errc::Range>;
using EmptyFeatureSet = ErrorOf<Errc::EmptyFeatureSet>;
using ShapeMismatch = ErrorOf<Errc::ShapeMismatch>;
using InsufficientSamples = ErrorOf<Errc::InsufficientSamples>;
using NonFiniteLoss = ErrorOf<Errc::NonFiniteLoss>;
using IoError = ErrorOf<Errc::Io>;

/// Malformed CSV cell. Row and column are 1-based positions in the file.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error(Errc::Parse, what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace irfs
