// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "sceneedit/assets.hpp"
#include "sceneedit/error.hpp"

namespace sceneedit {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path asset_dir;
  int width = 512;
  int height = 512;
  int max_history = 4;
  std::string generator = "oracle";  // "oracle" | "network-stub"
  std::uint64_t seed = 0;
  std::chrono::seconds idle_ttl{1800};
  std::filesystem::path export_dir = "exports";

  /// Throws InvalidConfig on out-of-range values.
  void validate() const;
};

/// HTTP status for a library error code.
int http_status(ErrorCode code);

/// Session service under /api/v1. Requests for one session are serialized
/// by a per-session lock; distinct sessions run concurrently.
class SessionService {
 public:
  SessionService(ServiceConfig config, AssetStore assets);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  /// Binds the listening socket; returns the bound port. Throws IoFailure.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();

  std::size_t session_count() const;
  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t expire_idle(std::chrono::steady_clock::time_point now);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sceneedit
