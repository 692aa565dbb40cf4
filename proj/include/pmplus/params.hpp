#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <type_traits>

namespace pmplus {

namespace detail {

// Double-width integer for each supported word type. Toy widths (n <= 16)
// live in 8/16-bit words but use a 32-bit wide type so that sums of a few
// products never overflow.
template <class Word> struct wide_of;
template <> struct wide_of<std::uint8_t> { using type = std::uint32_t; };
template <> struct wide_of<std::uint16_t> { using type = std::uint32_t; };
template <> struct wide_of<std::uint32_t> { using type = std::uint64_t; };
template <> struct wide_of<std::uint64_t> { using type = unsigned __int128; };

struct known_prime { unsigned bits; std::uint32_t k; };

// Smallest primes of the form 2^n + k.
inline constexpr known_prime kKnownPrimes[] = {
    {4, 1}, {8, 1}, {16, 1}, {32, 15}, {64, 13},
};

constexpr bool is_known_prime(unsigned bits, std::uint32_t k) {
  for (auto kp : kKnownPrimes)
    if (kp.bits == bits && kp.k == k) return true;
  return false;
}

// (p - kappa - 1)(p - 1) < 2^{2n}, rewritten with d = kappa + 1 - k as
// (k - 1 - d) * 2^n < d * (k - 1) to avoid forming 2^{2n}.
constexpr bool products_fit(unsigned bits, std::uint32_t k, std::uint32_t kappa) {
  const __int128 d = static_cast<__int128>(kappa) + 1 - k;
  if (d < 1) return false;
  const __int128 lhs = (static_cast<__int128>(k) - 1 - d) * (static_cast<__int128>(1) << bits);
  return lhs < d * (static_cast<__int128>(k) - 1);
}

} // namespace detail

/// Compile-time parameter set for one member of the PM+ family.
///
/// `Word` stores an n-bit character, `Bits` is n, the field prime is
/// p = 2^n + `K`, multipliers are drawn from [1, p - `Kappa`), each block
/// hashes `M` characters and the tree has at most `Levels` levels.
/// The same templates run the production widths and the toy widths used
/// for exhaustive checks.
template <class Word, unsigned Bits, std::uint32_t K, std::uint32_t Kappa,
          std::size_t M, std::size_t Levels>
struct params {
  using word = Word;
  using wide = typename detail::wide_of<Word>::type;

  static constexpr unsigned bits = Bits;
  static constexpr std::uint32_t k = K;
  static constexpr std::uint32_t kappa = Kappa;
  static constexpr std::size_t m = M;
  static constexpr std::size_t levels = Levels;

  static constexpr word mask =
      Bits == std::numeric_limits<Word>::digits
          ? std::numeric_limits<Word>::max()
          : static_cast<word>((word{1} << Bits) - 1);

  /// Largest admissible multiplier, p - kappa - 1, as a word.
  static constexpr word max_key = static_cast<word>(mask - (Kappa - K));

  static_assert(std::is_unsigned_v<Word>);
  static_assert(Bits <= static_cast<unsigned>(std::numeric_limits<Word>::digits));
  static_assert(detail::is_known_prime(Bits, K), "2^n + k is not a tabulated prime");
  static_assert(M >= 2 && Levels >= 1);
  // p - kappa <= 2^n so that multipliers fit in one word.
  static_assert(Kappa >= K);
  static_assert(detail::products_fit(Bits, K, Kappa), "kappa too small for two-word products");
  // The three-word residue reduces to v0 + v1 * 2^n with v1 <= 2.
  static_assert(static_cast<unsigned __int128>(K) * K * (M + 1) <
                    (static_cast<unsigned __int128>(1) << Bits) + 2,
                "block too wide for three-word reduction");
};

using pm32 = params<std::uint32_t, 32, 15, 28, 128, 8>;
using pm64 = params<std::uint64_t, 64, 13, 24, 128, 8>;

/// p = 17, exhaustive key enumeration is cheap.
using toy17 = params<std::uint8_t, 4, 1, 2, 2, 3>;
/// p = 17 with enough levels to hold 31 characters.
using toy17_deep = params<std::uint8_t, 4, 1, 2, 2, 5>;
/// p = 257, used for regularity sweeps.
using toy257 = params<std::uint8_t, 8, 1, 2, 4, 3>;
/// p = 257 with production block width, used for exhaustive reduction checks.
using toy257_wide = params<std::uint8_t, 8, 1, 2, 128, 3>;

template <class P>
concept production_params = std::is_same_v<P, pm32> || std::is_same_v<P, pm64>;

} // namespace pmplus
