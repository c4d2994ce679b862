// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo_cli/cli.hpp"

int main(int argc, char** argv) { return mpdo::cli::main_entry(argc, argv); }
