// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "sceneedit/cli.hpp"

int main(int argc, char** argv) { return sceneedit::run_cli(argc, argv, std::cout, std::cerr); }
