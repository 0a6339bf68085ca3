// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace sceneedit {

/// Entry point of the `sceneedit` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sceneedit
