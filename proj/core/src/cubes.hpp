// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "mpdo/grid.hpp"

namespace mpdo::detail {

// Unit-cube bookkeeping for one axis of a cube-aligned torus.
struct AxisCubes {
  int res = 0;
  int units = 0;           // number of unit cubes along the axis
  int per_unit = 0;        // samples per unit length
  double spacing = 0.0;
  std::vector<int> cube;   // cube index in [0, units) of each sample
  std::vector<int> local;  // position of each sample inside its cube, in [0, per_unit)
};

AxisCubes axis_cubes(int res, double period);

// For each unit product cube: sum |v|^p over its samples (or max |v| when p
// is infinite). Axes are row-major with the first axis slowest.
std::vector<double> cube_reduce(const std::vector<std::complex<double>>& values,
                                const std::vector<AxisCubes>& axes, double p);

std::vector<AxisCubes> field_axes(const Grid& g);

}  // namespace mpdo::detail
