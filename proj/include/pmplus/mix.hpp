#pragma once

#include <cstdint>

namespace pmplus {

namespace detail {

template <class W>
struct mix_constants;

template <>
struct mix_constants<std::uint32_t> {
  static constexpr unsigned shift1 = 13;
  static constexpr std::uint32_t mul = 0xab3be54fu;
  static constexpr unsigned shift2 = 16;
};

template <>
struct mix_constants<std::uint64_t> {
  static constexpr unsigned shift1 = 33;
  static constexpr std::uint64_t mul = 0xc4ceb9fe1a85ec53ull;
  static constexpr unsigned shift2 = 33;
};

// Inverse of an odd multiplier modulo 2^w by Newton iteration.
template <class W>
constexpr W mul_inverse(W a) {
  W x = a;
  for (int i = 0; i < 6; ++i) x = static_cast<W>(x * static_cast<W>(2 - a * x));
  return x;
}

template <class W>
constexpr W unxorshift(W z, unsigned shift) {
  W x = z;
  for (unsigned s = shift; s < sizeof(W) * 8; s += shift) x = z ^ static_cast<W>(x >> shift);
  return x;
}

} // namespace detail

/// xorshift-multiply-xorshift finalizer; a bijection on W.
template <class W>
constexpr W mix(W z) {
  using c = detail::mix_constants<W>;
  z ^= z >> c::shift1;
  z = static_cast<W>(z * c::mul);
  z ^= z >> c::shift2;
  return z;
}

template <class W>
constexpr W unmix(W z) {
  using c = detail::mix_constants<W>;
  constexpr W inv = detail::mul_inverse(c::mul);
  z = detail::unxorshift(z, c::shift2);
  z = static_cast<W>(z * inv);
  return detail::unxorshift(z, c::shift1);
}

static_assert(static_cast<std::uint32_t>(detail::mix_constants<std::uint32_t>::mul *
                                         detail::mul_inverse(detail::mix_constants<std::uint32_t>::mul)) == 1);
static_assert(detail::mix_constants<std::uint64_t>::mul *
                  detail::mul_inverse(detail::mix_constants<std::uint64_t>::mul) ==
              1);

} // namespace pmplus
