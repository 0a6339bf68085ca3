// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/error.hpp"

namespace sceneedit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::IllegalKindForDomain: return "IllegalKindForDomain";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::DegenerateFootprint: return "DegenerateFootprint";
    case ErrorCode::DegenerateAsset: return "DegenerateAsset";
    case ErrorCode::SubpixelSize: return "SubpixelSize";
    case ErrorCode::MissingAsset: return "MissingAsset";
    case ErrorCode::PlacementExhausted: return "PlacementExhausted";
    case ErrorCode::CollisionViolation: return "CollisionViolation";
    case ErrorCode::FrustumViolation: return "FrustumViolation";
    case ErrorCode::InconsistentSequence: return "InconsistentSequence";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::GeneratorFailure: return "GeneratorFailure";
    case ErrorCode::IllegalCommand: return "IllegalCommand";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::CorruptManifest: return "CorruptManifest";
    case ErrorCode::MissingFrame: return "MissingFrame";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

}  // namespace sceneedit
