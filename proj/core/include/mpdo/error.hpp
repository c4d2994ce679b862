// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mpdo {

enum class Errc {
  parameter,
  alignment,
  range,
  shape,
  resolution,
  cost_cap,
  construction,
  type,
  bandwidth,
  io,
};

const char* errc_name(Errc code);

// Every failure raised by the library carries one of the categories above so
// that front ends can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + " error: " + what),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mpdo
