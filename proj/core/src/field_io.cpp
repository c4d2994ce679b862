// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpdo/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mpdo/error.hpp"

namespace mpdo {

namespace {

constexpr char kMagic[8] = {'M', 'P', 'D', 'O', 'F', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  std::array<unsigned char, sizeof(T)> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), sizeof(T))) throw Error(Errc::io, "truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace

void write_field(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write field file '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.res()));
  put<double>(out, f.grid.period());
  put<std::uint32_t>(out, f.side == Side::physical ? 0u : 1u);
  put<std::uint32_t>(out, 0u);
  for (const cplx& v : f.values) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw Error(Errc::io, "failed writing field file '" + path + "'");
}

Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open field file '" + path + "'");
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw Error(Errc::io, "'" + path + "' is not a field file");
  const auto dim = get<std::uint32_t>(in);
  const auto res = get<std::uint32_t>(in);
  const double period = get<double>(in);
  const auto side = get<std::uint32_t>(in);
  get<std::uint32_t>(in);
  if (side > 1) throw Error(Errc::io, "field file has an unknown side tag");
  Grid g(static_cast<int>(dim), period, static_cast<int>(res));
  Field f(g, side == 0 ? Side::physical : Side::frequency);
  for (auto& v : f.values) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return f;
}

}  // namespace mpdo
