#pragma once

// Exact fixed-width arithmetic modulo p = 2^n + k: two-word products,
// three-word accumulation and the two-stage reduction back into [0, p).

#include <cassert>
#include <cstdint>
#include <cstdlib>

#include "params.hpp"

#if !defined(NDEBUG) || defined(PMPLUS_CHECK_CONTRACTS)
#define PMPLUS_CONTRACT(cond)                                                  \
  do {                                                                         \
    if (!(cond)) ::pmplus::detail::contract_failed(#cond, __FILE__, __LINE__); \
  } while (false)
#else
#define PMPLUS_CONTRACT(cond) do {} while (false)
#endif

#include <cstdio>

namespace pmplus {

namespace detail {
[[noreturn]] inline void contract_failed(const char* expr, const char* file, int line) {
  std::fprintf(stderr, "pmplus: contract violated: %s (%s:%d)\n", expr, file, line);
  std::abort();
}
} // namespace detail

/// Value lo + hi * 2^n of a double-width product.
template <class P>
struct double_word {
  typename P::word lo{};
  typename P::word hi{};
  friend constexpr bool operator==(const double_word&, const double_word&) = default;
};

/// An element of [0, p). hi is 1 only for the k values in [2^n, p), in which
/// case lo < k. Left uninitialized by default so that tree buffers are cheap
/// to construct; use `field_element{}` for zero.
template <class P>
struct field_element {
  typename P::word lo;
  std::uint8_t hi;

  static constexpr field_element from_word(typename P::word w) { return {w, 0}; }

  constexpr typename P::wide value() const {
    return static_cast<typename P::wide>(lo) + (static_cast<typename P::wide>(hi) << P::bits);
  }
  constexpr bool valid() const { return hi == 0 || (hi == 1 && lo < P::k); }

  friend constexpr bool operator==(const field_element&, const field_element&) = default;
};

/// Exact value w0 + w1 * 2^n + w2 * 2^{2n}. Seeded with one word and fed at
/// most m two-word products, w2 stays <= m.
template <class P>
struct triple_accumulator {
  typename P::word w0{};
  typename P::word w1{};
  typename P::word w2{};
  friend constexpr bool operator==(const triple_accumulator&, const triple_accumulator&) = default;
};

template <class P>
constexpr double_word<P> mul_wide(typename P::word a, typename P::word b) {
  using wide = typename P::wide;
  const wide prod = static_cast<wide>(a) * b;
  return {static_cast<typename P::word>(prod & P::mask),
          static_cast<typename P::word>((prod >> P::bits) & P::mask)};
}

/// a * s for a key a in [1, p - kappa) and s in [0, p). The product is below
/// 2^{2n}, so adding a to the high word when s >= 2^n cannot overflow.
template <class P>
constexpr double_word<P> mul_field(typename P::word a, field_element<P> s) {
  PMPLUS_CONTRACT(a >= 1 && a <= P::max_key);
  PMPLUS_CONTRACT(s.valid());
  auto prod = mul_wide<P>(a, s.lo);
  if (s.hi) prod.hi = static_cast<typename P::word>((prod.hi + a) & P::mask);
  return prod;
}

template <class P>
constexpr triple_accumulator<P> acc3_add(triple_accumulator<P> acc, double_word<P> prod) {
  using wide = typename P::wide;
  PMPLUS_CONTRACT(acc.w2 < P::m);
  wide s = static_cast<wide>(acc.w0) + prod.lo;
  acc.w0 = static_cast<typename P::word>(s & P::mask);
  s = static_cast<wide>(acc.w1) + prod.hi + (s >> P::bits);
  acc.w1 = static_cast<typename P::word>(s & P::mask);
  acc.w2 = static_cast<typename P::word>(acc.w2 + (s >> P::bits));
  return acc;
}

/// Congruent, not necessarily canonical, form v0 + v1 * 2^n with v1 <= 2.
template <class P>
struct reduced_pair {
  typename P::word v0{};
  std::uint8_t v1{};
  friend constexpr bool operator==(const reduced_pair&, const reduced_pair&) = default;
};

/// Folds the top two words using 2^n = -k and 2^{2n} = k^2 (mod p):
///   S = (w0 + k^2 w2 + k u1) + (2^n + k - u0)   where k w1 = u1 2^n + u0.
/// Every term is bounded so the sum is below 3 * 2^n.
template <class P>
constexpr reduced_pair<P> reduce3_to_2(triple_accumulator<P> acc) {
  using wide = typename P::wide;
  PMPLUS_CONTRACT(acc.w2 <= P::m);
  constexpr wide k = P::k;
  const wide kw1 = k * acc.w1;
  const wide u0 = kw1 & P::mask;
  const wide u1 = kw1 >> P::bits;
  const wide sum = static_cast<wide>(acc.w0) + k * k * acc.w2 + k * u1 +
                   ((static_cast<wide>(1) << P::bits) + k - u0);
  const auto v1 = static_cast<std::uint8_t>(sum >> P::bits);
  PMPLUS_CONTRACT(v1 <= 2);
  return {static_cast<typename P::word>(sum & P::mask), v1};
}

/// Canonical residue of v0 + v1 * 2^n for v1 in {0, 1, 2}.
template <class P>
constexpr field_element<P> reduce2_final(reduced_pair<P> v) {
  using word = typename P::word;
  constexpr word k = static_cast<word>(P::k);
  PMPLUS_CONTRACT(v.v1 <= 2);
  // v0 >= 2k implies k * v1 <= v0.
  if (v.v0 >= 2 * k || static_cast<word>(k * v.v1) <= v.v0)
    return {static_cast<word>(v.v0 - k * v.v1), 0};
  if (v.v1 == 1) return {v.v0, 1};
  // v1 == 2 and v0 < 2k: 2 * 2^n = 2^n - k, so the result is 2^n - k + v0.
  if (v.v0 >= k) return {static_cast<word>(v.v0 - k), 1};
  return {static_cast<word>((v.v0 - k) & P::mask), 0};
}

template <class P>
constexpr field_element<P> mod_p(triple_accumulator<P> acc) {
  return reduce2_final<P>(reduce3_to_2<P>(acc));
}

} // namespace pmplus
