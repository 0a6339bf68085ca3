// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/weights.hpp"

#include <bit>
#include <cstring>
#include <json.hpp>

#include "sceneedit/error.hpp"
#include "sceneedit/raster.hpp"

namespace sceneedit {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "weight files assume a little-endian host");

std::size_t NamedArray::element_count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

void WeightFile::put(const std::string& name, NamedArray array) {
  for (auto d : array.shape) {
    if (d < 0) fail(ErrorCode::ShapeMismatch, "negative dimension in '" + name + "'");
  }
  if (array.element_count() != array.values.size()) {
    fail(ErrorCode::ShapeMismatch, "array '" + name + "' does not match its shape");
  }
  arrays_[name] = std::move(array);
}

const NamedArray& WeightFile::get(const std::string& name) const {
  auto it = arrays_.find(name);
  if (it == arrays_.end()) fail(ErrorCode::SchemaViolation, "weight file has no array '" + name + "'");
  return it->second;
}

std::vector<std::uint8_t> WeightFile::serialize() const {
  json header = json::array();
  std::vector<std::uint8_t> data;
  for (const auto& [name, arr] : arrays_) {
    header.push_back({{"name", name}, {"shape", arr.shape}, {"dtype", "f32"}, {"offset", data.size()}});
    for (double v : arr.values) {
      const float f = static_cast<float>(v);
      std::uint8_t b[4];
      std::memcpy(b, &f, 4);
      data.insert(data.end(), b, b + 4);
    }
  }
  const std::string text = header.dump();
  std::vector<std::uint8_t> out(8);
  const std::uint64_t size = text.size();
  std::memcpy(out.data(), &size, 8);
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

WeightFile WeightFile::deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) fail(ErrorCode::SchemaViolation, "weight file truncated");
  std::uint64_t header_size = 0;
  std::memcpy(&header_size, bytes.data(), 8);
  if (header_size > bytes.size() - 8) fail(ErrorCode::SchemaViolation, "weight header exceeds file size");
  const std::size_t data_start = 8 + header_size;
  WeightFile file;
  try {
    const json header = json::parse(bytes.begin() + 8, bytes.begin() + static_cast<std::ptrdiff_t>(data_start));
    for (const auto& entry : header) {
      if (entry.at("dtype").get<std::string>() != "f32") fail(ErrorCode::SchemaViolation, "unsupported dtype");
      NamedArray arr;
      arr.shape = entry.at("shape").get<std::vector<std::int64_t>>();
      const std::size_t offset = entry.at("offset").get<std::size_t>();
      const std::size_t count = arr.element_count();
      if (offset > bytes.size() - data_start || count * 4 > bytes.size() - data_start - offset) {
        fail(ErrorCode::SchemaViolation, "array data out of range");
      }
      arr.values.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        float f;
        std::memcpy(&f, bytes.data() + data_start + offset + 4 * i, 4);
        arr.values[i] = f;
      }
      file.put(entry.at("name").get<std::string>(), std::move(arr));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaViolation, std::string("weight header: ") + e.what());
  }
  return file;
}

void WeightFile::save(const std::filesystem::path& path) const { write_file_bytes(path, serialize()); }

WeightFile WeightFile::load(const std::filesystem::path& path) { return deserialize(read_file_bytes(path)); }

}  // namespace sceneedit
