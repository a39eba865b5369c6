// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/errors.hpp"

namespace lesioneval {

const char* to_string(ErrKind k) {
  switch (k) {
    case ErrKind::MalformedHeader: return "MalformedHeader";
    case ErrKind::UnsupportedDatatype: return "UnsupportedDatatype";
    case ErrKind::TruncatedPayload: return "TruncatedPayload";
    case ErrKind::NonFiniteVoxel: return "NonFiniteVoxel";
    case ErrKind::DimensionMismatch: return "DimensionMismatch";
    case ErrKind::NonPositiveParams: return "NonPositiveParams";
    case ErrKind::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrKind::GeometryMismatch: return "GeometryMismatch";
    case ErrKind::EmptyReference: return "EmptyReference";
    case ErrKind::BothEmpty: return "BothEmpty";
    case ErrKind::EmptyPopulation: return "EmptyPopulation";
    case ErrKind::InsufficientPopulation: return "InsufficientPopulation";
    case ErrKind::MissingIntensity: return "MissingIntensity";
    case ErrKind::TooFewPairs: return "TooFewPairs";
    case ErrKind::InsufficientAlgorithms: return "InsufficientAlgorithms";
    case ErrKind::EmptySubset: return "EmptySubset";
    case ErrKind::SchemaViolation: return "SchemaViolation";
    case ErrKind::DuplicateCase: return "DuplicateCase";
    case ErrKind::MissingFile: return "MissingFile";
    case ErrKind::TooFewMasks: return "TooFewMasks";
    case ErrKind::PlacementFailure: return "PlacementFailure";
    case ErrKind::IoFailure: return "IoFailure";
    case ErrKind::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace lesioneval
