#pragma once

// Key schedule generation and the binary key file format.
//
// Layout (all integers little-endian):
//   0  "PMPH"     magic
//   4  0x01       version
//   5  0x20|0x40  word size in bits
//   6  0x08       level count
//   7  0x00       reserved
//   8  for each level: b, then a_1 .. a_128, one word each
//
// p and kappa follow from the word size and are not stored.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "key_schedule.hpp"

namespace pmplus {

inline constexpr std::array<std::byte, 4> kKeyMagic = {std::byte{'P'}, std::byte{'M'},
                                                       std::byte{'P'}, std::byte{'H'}};
inline constexpr std::uint8_t kKeyVersion = 1;
inline constexpr std::size_t kKeyHeaderSize = 8;

template <class P>
  requires production_params<P>
inline constexpr std::size_t key_file_size =
    kKeyHeaderSize + P::levels * (1 + P::m) * (P::bits / 8);

/// Draws a schedule from `gen`. Multipliers are uniform on [1, p - kappa)
/// by rejection of raw n-bit words; offsets are raw n-bit words. Per level
/// the draw order is a_1 .. a_m, then b.
template <class P, class Engine>
key_schedule<P> generate_schedule(Engine& gen) {
  using word = typename P::word;
  static_assert(sizeof(typename Engine::result_type) >= sizeof(word));
  auto draw = [&] { return static_cast<word>(gen() & P::mask); };
  key_schedule<P> ks;
  for (auto& level : ks.levels) {
    for (auto& a : level.a) {
      do a = draw();
      while (a < 1 || a > P::max_key);
    }
    level.b = draw();
  }
  return ks;
}

/// Deterministic schedule backed by std::mt19937_64 seeded with `seed`.
template <class P>
key_schedule<P> generate_schedule(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return generate_schedule<P>(gen);
}

/// Schedule seeded from std::random_device.
template <class P>
key_schedule<P> generate_schedule_from_entropy() {
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return generate_schedule<P>(seed);
}

namespace detail {

template <class W>
void put_le(std::vector<std::byte>& out, W w) {
  for (std::size_t i = 0; i < sizeof(W); ++i)
    out.push_back(static_cast<std::byte>((w >> (8 * i)) & 0xff));
}

template <class W>
W get_le(std::span<const std::byte> in) {
  W w = 0;
  for (std::size_t i = 0; i < sizeof(W); ++i)
    w |= static_cast<W>(static_cast<W>(in[i]) << (8 * i));
  return w;
}

struct key_header {
  std::uint8_t version;
  std::uint8_t word_bits;
  std::uint8_t levels;
  std::uint8_t reserved;
};

inline key_header parse_header(std::span<const std::byte> bytes) {
  if (bytes.size() < kKeyHeaderSize ||
      !std::equal(kKeyMagic.begin(), kKeyMagic.end(), bytes.begin()))
    throw error(errc::bad_magic, "not a key file");
  return {std::to_integer<std::uint8_t>(bytes[4]), std::to_integer<std::uint8_t>(bytes[5]),
          std::to_integer<std::uint8_t>(bytes[6]), std::to_integer<std::uint8_t>(bytes[7])};
}

} // namespace detail

template <class P>
  requires production_params<P>
std::vector<std::byte> save_schedule(const key_schedule<P>& ks) {
  std::vector<std::byte> out;
  out.reserve(key_file_size<P>);
  out.insert(out.end(), kKeyMagic.begin(), kKeyMagic.end());
  out.push_back(std::byte{kKeyVersion});
  out.push_back(static_cast<std::byte>(P::bits));
  out.push_back(static_cast<std::byte>(P::levels));
  out.push_back(std::byte{0});
  for (const auto& level : ks.levels) {
    detail::put_le(out, level.b);
    for (auto a : level.a) detail::put_le(out, a);
  }
  return out;
}

/// Parses and validates a key file for word size P::bits.
template <class P>
  requires production_params<P>
key_schedule<P> load_schedule(std::span<const std::byte> bytes) {
  using word = typename P::word;
  const auto h = detail::parse_header(bytes);
  if (h.version != kKeyVersion)
    throw error(errc::unsupported_version, "key file version " + std::to_string(h.version));
  if (h.word_bits != P::bits)
    throw error(errc::bad_magic, "key file word size " + std::to_string(h.word_bits) +
                                     ", expected " + std::to_string(P::bits));
  if (h.levels != P::levels || h.reserved != 0)
    throw error(errc::bad_magic, "unexpected level count or reserved byte");
  if (bytes.size() != key_file_size<P>)
    throw error(errc::bad_magic, "key file is " + std::to_string(bytes.size()) +
                                     " bytes, expected " + std::to_string(key_file_size<P>));

  key_schedule<P> ks;
  auto payload = bytes.subspan(kKeyHeaderSize);
  for (std::size_t j = 0; j < P::levels; ++j) {
    auto& level = ks.levels[j];
    level.b = detail::get_le<word>(payload);
    payload = payload.subspan(sizeof(word));
    for (std::size_t i = 0; i < P::m; ++i) {
      level.a[i] = detail::get_le<word>(payload);
      payload = payload.subspan(sizeof(word));
      if (level.a[i] < 1 || level.a[i] > P::max_key)
        throw error(errc::key_out_of_range, "multiplier " + std::to_string(i + 1) +
                                                " of level " + std::to_string(j + 1));
    }
  }
  return ks;
}

using any_schedule = std::variant<key_schedule<pm32>, key_schedule<pm64>>;

/// Loads a key file of either word size.
inline any_schedule load_any_schedule(std::span<const std::byte> bytes) {
  const auto h = detail::parse_header(bytes);
  if (h.version != kKeyVersion)
    throw error(errc::unsupported_version, "key file version " + std::to_string(h.version));
  switch (h.word_bits) {
    case 32: return load_schedule<pm32>(bytes);
    case 64: return load_schedule<pm64>(bytes);
    default: throw error(errc::bad_magic, "word size " + std::to_string(h.word_bits));
  }
}

} // namespace pmplus
