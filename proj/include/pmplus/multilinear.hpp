#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "wide_arith.hpp"

namespace pmplus {

/// Keys of one block function f(s) = (b + sum a_i s_i) mod p.
template <class P>
struct block_keys {
  std::array<typename P::word, P::m> a{};
  typename P::word b{};

  /// Every a_i in [1, p - kappa) and b in [0, 2^n).
  constexpr bool valid() const {
    for (auto ai : a)
      if (ai < 1 || ai > P::max_key) return false;
    return b <= P::mask;
  }

  friend constexpr bool operator==(const block_keys&, const block_keys&) = default;
};

// Both block hashes accept fewer than m inputs; the missing trailing
// components are zero and contribute nothing to the sum.

/// First-level block: inputs are plain n-bit words.
template <class P>
constexpr field_element<P> hash_block_words(const block_keys<P>& keys,
                                            std::span<const typename P::word> s) {
  PMPLUS_CONTRACT(s.size() <= P::m);
  triple_accumulator<P> acc{keys.b, 0, 0};
  for (std::size_t i = 0; i < s.size(); ++i)
    acc = acc3_add<P>(acc, mul_wide<P>(keys.a[i], s[i]));
  return mod_p<P>(acc);
}

/// Upper-level block: inputs are field elements in [0, p).
template <class P>
constexpr field_element<P> hash_block_elems(const block_keys<P>& keys,
                                            std::span<const field_element<P>> s) {
  PMPLUS_CONTRACT(s.size() <= P::m);
  triple_accumulator<P> acc{keys.b, 0, 0};
  for (std::size_t i = 0; i < s.size(); ++i)
    acc = acc3_add<P>(acc, mul_field<P>(keys.a[i], s[i]));
  return mod_p<P>(acc);
}

} // namespace pmplus
