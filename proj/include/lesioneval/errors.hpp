// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lesioneval {

enum class ErrKind {
  MalformedHeader,
  UnsupportedDatatype,
  TruncatedPayload,
  NonFiniteVoxel,
  DimensionMismatch,
  NonPositiveParams,
  RegionOutOfBounds,
  GeometryMismatch,
  EmptyReference,
  BothEmpty,
  EmptyPopulation,
  InsufficientPopulation,
  MissingIntensity,
  TooFewPairs,
  InsufficientAlgorithms,
  EmptySubset,
  SchemaViolation,
  DuplicateCase,
  MissingFile,
  TooFewMasks,
  PlacementFailure,
  IoFailure,
  InvalidArgument,
};

const char* to_string(ErrKind k);

/// Single exception type carrying a machine-checkable error kind.
class EvalError : public std::runtime_error {
 public:
  EvalError(ErrKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw EvalError(k, msg); }

}  // namespace lesioneval
