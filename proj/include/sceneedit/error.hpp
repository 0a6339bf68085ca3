// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sceneedit {

enum class ErrorCode {
  UnknownInstance,
  IllegalKindForDomain,
  BoundViolation,
  DegenerateFootprint,
  DegenerateAsset,
  SubpixelSize,
  MissingAsset,
  PlacementExhausted,
  CollisionViolation,
  FrustumViolation,
  InconsistentSequence,
  SamplingExhausted,
  SequenceTooShort,
  DimensionMismatch,
  ShapeMismatch,
  UnknownTarget,
  InvalidN,
  GeneratorFailure,
  IllegalCommand,
  IoFailure,
  CorruptManifest,
  MissingFrame,
  SchemaViolation,
  TooSmall,
  InvalidConfig,
  UnknownSession,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// HTTP layer forwards `code_name()` verbatim in its error bodies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sceneedit
