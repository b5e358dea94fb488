//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_ERRORS_HPP_
#define TARGEN_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace targen {

// Root of all library errors. `kind()` drives CLI exit codes:
// data errors exit 3, numeric errors exit 4, usage errors exit 2.
class Error : public std::runtime_error {
public:
  enum class Kind { kData, kNumeric, kUsage };

  Error(Kind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class DataError : public Error {
public:
  explicit DataError(std::string msg) : Error(Kind::kData, std::move(msg)) {}
};

class NumericError : public Error {
public:
  explicit NumericError(std::string msg)
      : Error(Kind::kNumeric, std::move(msg)) {}
};

class UsageError : public Error {
public:
  explicit UsageError(std::string msg) : Error(Kind::kUsage, std::move(msg)) {}
};

#define TARGEN_DATA_ERROR(NAME)                                               \
  class NAME : public DataError {                                             \
  public:                                                                     \
    explicit NAME(std::string msg) : DataError(#NAME ": " + msg) {}           \
  }

#define TARGEN_NUMERIC_ERROR(NAME)                                            \
  class NAME : public NumericError {                                          \
  public:                                                                     \
    explicit NAME(std::string msg) : NumericError(#NAME ": " + msg) {}        \
  }

// chem-graph
class SyntaxError : public DataError {
public:
  SyntaxError(std::size_t pos, const std::string& reason)
      : DataError("SyntaxError at position " + std::to_string(pos) + ": " +
                  reason),
        pos_(pos) {}
  std::size_t pos() const noexcept { return pos_; }

private:
  std::size_t pos_;
};

TARGEN_DATA_ERROR(UnsupportedFeature);
TARGEN_DATA_ERROR(TooManyAtoms);
TARGEN_DATA_ERROR(EmptyGraph);
TARGEN_DATA_ERROR(InconsistentMatrix);
TARGEN_DATA_ERROR(EmptyBatch);

// pocket
class MalformedRecord : public DataError {
public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : DataError("MalformedRecord at line " + std::to_string(line) + ": " +
                  reason),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

TARGEN_DATA_ERROR(EmptyLigand);
TARGEN_DATA_ERROR(EdgeIndexOutOfRange);
TARGEN_DATA_ERROR(AsymmetricEdgeList);
TARGEN_DATA_ERROR(SelectorMatchesNothing);

// numcore
TARGEN_NUMERIC_ERROR(ShapeMismatch);
TARGEN_NUMERIC_ERROR(NonFiniteValue);
TARGEN_NUMERIC_ERROR(NotScalarLoss);
TARGEN_NUMERIC_ERROR(NestedTapeUnsupported);

// nets / training
TARGEN_DATA_ERROR(VariantMismatch);
TARGEN_DATA_ERROR(DataExhausted);
TARGEN_NUMERIC_ERROR(NonFiniteLoss);
TARGEN_DATA_ERROR(CheckpointCorrupt);

// metrics
TARGEN_DATA_ERROR(WidthMismatch);
TARGEN_DATA_ERROR(BatchTooSmall);
TARGEN_DATA_ERROR(EmptySample);

#undef TARGEN_DATA_ERROR
#undef TARGEN_NUMERIC_ERROR

}  // namespace targen

#endif  // TARGEN_ERRORS_HPP_
