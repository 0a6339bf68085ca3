// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sceneedit {

struct NamedArray {
  std::vector<std::int64_t> shape;
  std::vector<double> values;  // stored as f32 on disk

  std::size_t element_count() const;
  friend bool operator==(const NamedArray&, const NamedArray&) = default;
};

/// Flat binary container of named f32 arrays.
///
/// Layout (little-endian):
///   u64  header_size
///   u8[] header: JSON array of {"name", "shape", "dtype": "f32", "offset"}
///   u8[] data: concatenated arrays; offset is relative to the data start
class WeightFile {
 public:
  void put(const std::string& name, NamedArray array);
  const NamedArray& get(const std::string& name) const;
  bool contains(const std::string& name) const { return arrays_.count(name) != 0; }
  const std::map<std::string, NamedArray>& arrays() const { return arrays_; }

  std::vector<std::uint8_t> serialize() const;
  static WeightFile deserialize(const std::vector<std::uint8_t>& bytes);

  void save(const std::filesystem::path& path) const;
  static WeightFile load(const std::filesystem::path& path);

 private:
  std::map<std::string, NamedArray> arrays_;
};

}  // namespace sceneedit
