#pragma once

#include <array>

#include "multilinear.hpp"

namespace pmplus {

/// The random identity of one hash function: independent block keys for
/// each tree level. levels[0] is applied to the input words.
template <class P>
struct key_schedule {
  std::array<block_keys<P>, P::levels> levels{};

  constexpr bool valid() const {
    for (const auto& l : levels)
      if (!l.valid()) return false;
    return true;
  }

  friend constexpr bool operator==(const key_schedule&, const key_schedule&) = default;
};

} // namespace pmplus
