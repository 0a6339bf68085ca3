// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <string>
#include <system_error>

int main(int argc, char** argv) {
  doctest::Context context(argc, argv);
  const int status = context.run();
  // Scratch directories from support.hpp live under this per-process root.
  std::error_code ec;
  std::filesystem::remove_all(std::filesystem::temp_directory_path() / ("sceneedit-" + std::to_string(::getpid())), ec);
  return status;
}
