// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "sceneedit/error.hpp"
#include "sceneedit/planner_syn.hpp"

namespace sceneedit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path, ErrorCode code) {
  std::ifstream in(path);
  if (!in) fail(code, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(code, path.string() + ": " + e.what());
  }
}

json sequence_summary(const SequenceSummary& s, const ExportContext& ctx) {
  return {{"id", s.id},
          {"domain", std::string(to_string(s.domain))},
          {"seed", s.seed},
          {"seq_len", s.seq_len},
          {"truncated", s.truncated},
          {"path", s.id},
          {"config_hash", config_hash(ctx.config)}};
}

}  // namespace

SequenceSummary summarize(const Sequence& s) {
  return {s.id, s.domain(), s.seed, s.records.size(), s.truncated};
}

std::string frame_file_name(std::size_t index, std::size_t frame_count) {
  std::size_t digits = 3;
  for (std::size_t n = frame_count > 0 ? frame_count - 1 : 0; n >= 1000; n /= 10) ++digits;
  std::string s = std::to_string(index);
  if (s.size() < digits) s.insert(0, digits - s.size(), '0');
  return s + ".png";
}

fs::path write_sequence_dir(const Sequence& sequence, const fs::path& dir, const ExportContext& context) {
  if (sequence.states.empty() || sequence.frames.size() != sequence.states.size() ||
      sequence.records.size() + 1 != sequence.states.size()) {
    fail(ErrorCode::InconsistentSequence, "sequence '" + sequence.id + "' has mismatched lengths");
  }
  const fs::path root = dir / sequence.id;
  const fs::path frames_dir = root / "frames";
  std::error_code ec;
  fs::create_directories(frames_dir, ec);
  if (ec) fail(ErrorCode::IoFailure, "cannot create " + frames_dir.string() + ": " + ec.message());

  const SceneState& initial = sequence.states.front();
  json frames = json::array();
  json annotations = json::array();
  for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
    const std::string name = frame_file_name(i, sequence.frames.size());
    write_png(frames_dir / name, sequence.frames[i].image);
    frames.push_back("frames/" + name);
    json per_frame = json::array();
    for (const Annotation& a : sequence.frames[i].annotations) per_frame.push_back(to_json(a));
    annotations.push_back(std::move(per_frame));
  }
  json rounds = json::array();
  for (std::size_t i = 0; i < sequence.records.size(); ++i) {
    rounds.push_back({{"record", to_json(sequence.records[i])}, {"state", to_json(sequence.states[i + 1])}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"id", sequence.id},
              {"domain", std::string(to_string(initial.domain))},
              {"seed", sequence.seed},
              {"seq_len", sequence.records.size()},
              {"truncated", sequence.truncated},
              {"canvas", {initial.width, initial.height}},
              {"background_id", initial.background_id},
              {"asset_dir", context.asset_dir},
              {"config", to_json(context.config)},
              {"config_hash", config_hash(context.config)},
              {"camera", initial.camera ? to_json(*initial.camera) : json(nullptr)},
              {"initial_state", to_json(initial)},
              {"frames", std::move(frames)},
              {"rounds", std::move(rounds)},
              {"annotations", std::move(annotations)}};
  write_text_file(root / "annotations.json", dump_json(doc));

  if (initial.domain == Domain::Syn) {
    std::optional<AssetStore> loaded;
    const AssetStore* assets = context.assets;
    if (!assets) assets = &loaded.emplace(AssetStore::load(context.asset_dir));
    std::vector<OperationCommand> commands;
    for (const auto& r : sequence.records) commands.push_back(r.command);
    write_text_file(root / "script.json", dump_json(to_json(emit_scene_script(sequence.states, commands, *assets))));
  }
  return root / "annotations.json";
}

void update_dataset_manifest(const fs::path& dir, const std::vector<SequenceSummary>& sequences,
                             const ExportContext& context) {
  const fs::path path = dir / "manifest.json";
  std::map<std::string, json> entries;
  if (fs::exists(path)) {
    const json existing = read_json(path, ErrorCode::CorruptManifest);
    try {
      for (const auto& e : existing.at("sequences")) entries[e.at("id").get<std::string>()] = e;
    } catch (const json::exception& e) {
      fail(ErrorCode::CorruptManifest, path.string() + ": " + e.what());
    }
  }
  for (const auto& s : sequences) entries[s.id] = sequence_summary(s, context);
  json list = json::array();
  for (auto& [id, e] : entries) list.push_back(std::move(e));
  const json doc = {{"schema_version", kSchemaVersion}, {"asset_dir", context.asset_dir}, {"sequences", std::move(list)}};
  write_text_file(path, dump_json(doc));
}

fs::path export_sequence(const Sequence& sequence, const fs::path& dir, const ExportContext& context) {
  const fs::path out = write_sequence_dir(sequence, dir, context);
  update_dataset_manifest(dir, {summarize(sequence)}, context);
  return out;
}

Sequence import_sequence(const fs::path& sequence_dir) {
  const json doc = read_json(sequence_dir / "annotations.json", ErrorCode::CorruptManifest);
  Sequence seq;
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      fail(ErrorCode::SchemaViolation, "unsupported schema version");
    }
    seq.id = doc.at("id").get<std::string>();
    seq.seed = doc.at("seed").get<std::uint64_t>();
    seq.truncated = doc.at("truncated").get<bool>();
    seq.states.push_back(scene_state_from_json(doc.at("initial_state")));
    const auto& rounds = doc.at("rounds");
    for (const auto& r : rounds) {
      seq.records.push_back(operation_record_from_json(r.at("record")));
      seq.states.push_back(scene_state_from_json(r.at("state")));
    }
    if (doc.at("seq_len").get<std::size_t>() != seq.records.size()) {
      fail(ErrorCode::SchemaViolation, "seq_len does not match the round count");
    }
    const auto& frames = doc.at("frames");
    const auto& annotations = doc.at("annotations");
    if (frames.size() != seq.states.size() || annotations.size() != frames.size()) {
      fail(ErrorCode::SchemaViolation, "frame count must be seq_len + 1");
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const fs::path file = sequence_dir / frames[i].get<std::string>();
      if (!fs::exists(file)) fail(ErrorCode::MissingFrame, "missing frame " + file.string());
      Observation obs;
      obs.image = read_png(file);
      for (const auto& a : annotations[i]) obs.annotations.push_back(annotation_from_json(a));
      seq.frames.push_back(std::move(obs));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaViolation, sequence_dir.string() + ": " + e.what());
  }
  return seq;
}

ExportContext import_context(const fs::path& sequence_dir) {
  const json doc = read_json(sequence_dir / "annotations.json", ErrorCode::CorruptManifest);
  ExportContext ctx;
  try {
    ctx.asset_dir = doc.at("asset_dir").get<std::string>();
    ctx.config = sampler_config_from_json(doc.at("config"));
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaViolation, sequence_dir.string() + ": " + e.what());
  }
  return ctx;
}

namespace {

// Replays one sequence; returns its first violation, if any.
std::optional<Violation> check_sequence(const fs::path& seq_dir, const std::string& id, const AssetStore* override_assets) {
  auto violation = [&](int round, std::string_view kind, const std::string& msg) {
    return Violation{id, round, std::string(kind), msg};
  };
  try {
    const Sequence seq = import_sequence(seq_dir);
    const ExportContext ctx = import_context(seq_dir);
    std::optional<AssetStore> loaded;
    const AssetStore* assets = override_assets;
    if (!assets) assets = &loaded.emplace(AssetStore::load(ctx.asset_dir));
    const TransitionLimits limits = ctx.config.limits();

    const SceneState& initial = seq.states.front();
    if (const auto problems = validate_state(initial, *assets, limits); !problems.empty()) {
      return violation(0, "BoundViolation", problems.front());
    }
    if (!(render(initial, *assets) == seq.frames.front())) {
      return violation(0, "SchemaViolation", "frame 0 does not match its replayed render");
    }
    SceneState state = initial;
    for (std::size_t i = 0; i < seq.records.size(); ++i) {
      const int round = static_cast<int>(i + 1);
      const OperationRecord& stored = seq.records[i];
      std::string why;
      if (!command_within_bounds(state, stored.command, ctx.config, &why)) {
        return violation(round, "BoundViolation", why);
      }
      SceneState next;
      try {
        next = apply_operation(state, stored.command, *assets, limits);
      } catch (const Error& e) {
        return violation(round, e.code_name(), e.what());
      }
      if (!(next == seq.states[i + 1])) {
        return violation(round, "SchemaViolation", "stored state does not follow from its operation");
      }
      if (!(render(next, *assets) == seq.frames[i + 1])) {
        return violation(round, "SchemaViolation", "frame does not match its replayed render");
      }
      if (!(make_record(state, next, stored.command, *assets) == stored)) {
        return violation(round, "SchemaViolation", "record regions do not match the replayed footprints");
      }
      state = std::move(next);
    }
    if (initial.domain == Domain::Syn) {
      const json script_doc = read_json(seq_dir / "script.json", ErrorCode::SchemaViolation);
      const auto replayed = replay_scene_script(scene_script_from_json(script_doc));
      if (replayed.size() != seq.states.size()) {
        return violation(-1, "SchemaViolation", "scene script covers a different number of frames");
      }
    }
  } catch (const Error& e) {
    return violation(-1, e.code_name(), e.what());
  }
  return std::nullopt;
}

}  // namespace

ValidationReport validate_dataset(const fs::path& dir, const AssetStore* assets) {
  ValidationReport report;
  json manifest;
  try {
    manifest = read_json(dir / "manifest.json", ErrorCode::CorruptManifest);
    if (manifest.at("schema_version").get<int>() != kSchemaVersion) {
      report.violations.push_back({"", -1, "CorruptManifest", "unsupported schema version"});
      return report;
    }
  } catch (const Error& e) {
    report.violations.push_back({"", -1, std::string(e.code_name()), e.what()});
    return report;
  } catch (const json::exception& e) {
    report.violations.push_back({"", -1, "CorruptManifest", e.what()});
    return report;
  }
  std::vector<std::pair<std::string, fs::path>> sequences;
  try {
    for (const auto& e : manifest.at("sequences")) {
      sequences.emplace_back(e.at("id").get<std::string>(), dir / e.at("path").get<std::string>());
    }
  } catch (const json::exception& e) {
    report.violations.push_back({"", -1, "CorruptManifest", e.what()});
    return report;
  }
  std::vector<std::optional<Violation>> results(sequences.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    results[i] = check_sequence(sequences[i].second, sequences[i].first, assets);
  }
  for (auto& r : results) {
    if (r) report.violations.push_back(std::move(*r));
  }
  report.sequences_checked = sequences.size();
  return report;
}

json to_json(const ValidationReport& report) {
  json list = json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"sequence", v.sequence}, {"round", v.round}, {"kind", v.kind}, {"message", v.message}});
  }
  return {{"ok", report.ok()}, {"sequences_checked", report.sequences_checked}, {"violations", std::move(list)}};
}

}  // namespace sceneedit
