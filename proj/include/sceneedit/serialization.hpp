// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "sceneedit/scene.hpp"

namespace sceneedit {

// JSON forms of the core value types. Field names are part of the on-disk
// dataset schema; doubles round-trip exactly.
nlohmann::json to_json(const SceneState& state);
SceneState scene_state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperationCommand& cmd);
OperationCommand operation_command_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperationRecord& record);
OperationRecord operation_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Annotation& annotation);
Annotation annotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Camera& camera);
Camera camera_from_json(const nlohmann::json& j);

/// Canonical text form: lexicographic keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace sceneedit
