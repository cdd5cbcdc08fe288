// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "tilegen/errors.hpp"
#include "tilegen/tiling.hpp"

namespace tilegen {

// Table file format, version 1, little-endian:
//   "TILE" | u16 version | f64 a | f64 b | u32 level | f64 initial height |
//   f64 total integral | u64 n_tiles | n_tiles x (u32 col, u32 row with the
//   Interior label in the top bit) | u32 CRC-32 of all preceding bytes.
// Tiles are stored column-major with ascending rows.

namespace detail {

inline std::uint32_t crc32_update(std::uint32_t crc, const void* data,
                                  std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  const auto* p = static_cast<const unsigned char*>(data);
  crc = ~crc;
  for (std::size_t i = 0; i < len; ++i)
    crc = table[(crc ^ p[i]) & 0xffu] ^ (crc >> 8);
  return ~crc;
}

struct CrcWriter {
  std::ostream& os;
  std::uint32_t crc = 0;
  void write(const void* data, std::size_t len) {
    os.write(static_cast<const char*>(data), std::streamsize(len));
    crc = crc32_update(crc, data, len);
  }
  void u16(std::uint16_t v) { le(v); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    le(bits);
  }
  template <class T>
  void le(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
      buf[i] = (unsigned char)((v >> (8 * i)) & 0xffu);
    write(buf, sizeof(T));
  }
};

struct CrcReader {
  std::istream& is;
  std::uint32_t crc = 0;
  void read(void* data, std::size_t len) {
    is.read(static_cast<char*>(data), std::streamsize(len));
    if (!is) throw FormatError("tile file truncated");
    crc = crc32_update(crc, data, len);
  }
  std::uint16_t u16() { return le<std::uint16_t>(); }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  double f64() {
    std::uint64_t bits = le<std::uint64_t>();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  template <class T>
  T le() {
    unsigned char buf[sizeof(T)];
    read(buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(buf[i]) << (8 * i);
    return v;
  }
};

}  // namespace detail

inline void serialize(const TilingTable& t, std::ostream& os) {
  detail::CrcWriter w{os};
  w.write("TILE", 4);
  w.u16(1);
  w.f64(t.a);
  w.f64(t.b);
  w.u32(t.level);
  w.f64(t.initial_height);
  w.f64(t.total_integral);
  w.u64(t.n_tiles());
  for (const Tile& tile : t.tiles) {
    w.u32(tile.col);
    w.u32(tile.row_and_label);
  }
  detail::CrcWriter tail{os};
  tail.u32(w.crc);
  if (!os) throw FormatError("tile file write failed");
}

inline TilingTable deserialize(std::istream& is) {
  detail::CrcReader r{is};
  char magic[4];
  r.read(magic, 4);
  if (std::memcmp(magic, "TILE", 4) != 0)
    throw FormatError("bad magic; not a tile file");
  const std::uint16_t version = r.u16();
  if (version != 1) throw FormatError("unsupported tile file version");
  TilingTable t;
  t.a = r.f64();
  t.b = r.f64();
  t.level = r.u32();
  t.initial_height = r.f64();
  t.total_integral = r.f64();
  const std::uint64_t n = r.u64();

  if (!(t.a < t.b) || !std::isfinite(t.a) || !std::isfinite(t.b))
    throw FormatError("tile file declares an invalid support");
  if (t.level < 1 || t.level > 31)
    throw FormatError("tile file declares an invalid level");
  if (!(t.initial_height > 0.0) || !std::isfinite(t.initial_height))
    throw FormatError("tile file declares an invalid height");
  if (!(t.total_integral > 0.0) || !std::isfinite(t.total_integral))
    throw FormatError("tile file declares an invalid integral");
  if (n > (std::uint64_t(1) << 40))
    throw FormatError("tile file declares an implausible tile count");

  t.tiles.resize(n);
  const std::uint64_t n_cols = t.n_columns();
  std::uint64_t prev_key = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Tile tile;
    tile.col = r.u32();
    tile.row_and_label = r.u32();
    if (tile.col >= n_cols)
      throw FormatError("tile column outside the table's column range");
    const std::uint64_t key =
        (std::uint64_t(tile.col) << 31) | std::uint64_t(tile.row());
    if (i > 0 && key <= prev_key)
      throw FormatError("tiles out of order or duplicate (col,row)");
    prev_key = key;
    t.tiles[i] = tile;
  }
  const std::uint32_t stored = detail::CrcReader{is}.u32();
  if (stored != r.crc) throw FormatError("tile file CRC mismatch");

  // majorization sanity: the union of tiles must cover the declared mass
  const double covered = double(n) * t.tile_area();
  if (covered < t.total_integral * (1.0 - 1e-9))
    throw FormatError("tile file violates N*S >= integral of f");
  return t;
}

inline void save_table(const TilingTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  serialize(t, os);
}

inline TilingTable load_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return deserialize(is);
}

}  // namespace tilegen
