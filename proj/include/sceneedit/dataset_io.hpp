// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sceneedit/sampler.hpp"
#include "sceneedit/serialization.hpp"

namespace sceneedit {

inline constexpr int kSchemaVersion = 1;

/// Context written alongside every exported sequence so it can be replayed.
struct ExportContext {
  std::string asset_dir;
  SamplerConfig config;
  const AssetStore* assets = nullptr;  // loaded from asset_dir when null
};

/// Frame file name for round `index`, zero-padded to at least three digits.
std::string frame_file_name(std::size_t index, std::size_t frame_count);

/// Writes `<dir>/<id>/frames/NNN.png`, `<dir>/<id>/annotations.json` (and
/// `script.json` for synthetic sequences). Overwrites in place.
std::filesystem::path write_sequence_dir(const Sequence& sequence, const std::filesystem::path& dir,
                                         const ExportContext& context);

/// Manifest entry for one exported sequence.
struct SequenceSummary {
  std::string id;
  Domain domain = Domain::Real;
  std::uint64_t seed = 0;
  std::size_t seq_len = 0;
  bool truncated = false;
};

SequenceSummary summarize(const Sequence& sequence);

/// Merges entries into <dir>/manifest.json, keyed and sorted by id.
void update_dataset_manifest(const std::filesystem::path& dir, const std::vector<SequenceSummary>& sequences,
                             const ExportContext& context);

/// write_sequence_dir + update_dataset_manifest; returns the sequence's
/// annotations.json path.
std::filesystem::path export_sequence(const Sequence& sequence, const std::filesystem::path& dir,
                                      const ExportContext& context);

/// Reads a sequence directory. Throws CorruptManifest, MissingFrame, or
/// SchemaViolation.
Sequence import_sequence(const std::filesystem::path& sequence_dir);

/// Reads the sampler config and asset dir recorded with a sequence.
ExportContext import_context(const std::filesystem::path& sequence_dir);

struct Violation {
  std::string sequence;
  int round = -1;  // -1 when not tied to a round
  std::string kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t sequences_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Replays every sequence listed in `<dir>/manifest.json` through the
/// simulator and checks bounds, records, annotations and frame bytes.
/// `assets` overrides the recorded asset directory when given.
ValidationReport validate_dataset(const std::filesystem::path& dir, const AssetStore* assets = nullptr);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace sceneedit
