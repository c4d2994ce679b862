// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "mpdo/grid.hpp"

namespace mpdo {

// Binary layout, little-endian: "MPDOFLD1", u32 dim, u32 res, f64 period,
// u32 side (0 physical, 1 frequency), u32 reserved, then res^dim pairs of
// f64 (re, im).
void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

}  // namespace mpdo
