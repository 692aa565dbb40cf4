#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "error.hpp"
#include "key_schedule.hpp"
#include "mix.hpp"

namespace pmplus {

namespace detail {
template <class P>
constexpr std::uint64_t max_sigma_length() {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < P::levels; ++i) {
    if (r > UINT64_MAX / P::m) return UINT64_MAX;
    r *= P::m;
  }
  return r;
}
} // namespace detail

/// Streaming tree hash over a key schedule.
///
/// Input words are gathered into blocks of m and hashed with the level-1
/// keys; each result is pushed into the level-1 buffer, and any buffer that
/// fills up is hashed with the next level's keys and pushed further up. At
/// most m (L - 1) field elements plus one block of words are held at once.
///
/// The string is terminated by a marker: a 0x01 byte right after the last
/// input byte, zero-filled to the word boundary, or a whole word equal to 1
/// when the input ends on a word boundary. Finalization flushes partial
/// blocks bottom-up (zero-padded) until a single value remains; the first
/// level is always hashed at least once.
///
/// The schedule must outlive the hasher.
template <class P>
class tree_hasher {
public:
  using word = typename P::word;
  using element = field_element<P>;

  static constexpr std::size_t word_bytes = P::bits / 8;
  /// Longest accepted input, in words (the marker makes it m^L).
  static constexpr std::uint64_t max_words = detail::max_sigma_length<P>() - 1;

  explicit tree_hasher(const key_schedule<P>& schedule) : schedule_(&schedule) {}

  /// Appends bytes, packed little-endian into n-bit words.
  void update(std::span<const std::byte> bytes)
    requires(P::bits % 8 == 0)
  {
    check_open();
    const std::uint64_t completing = (partial_bytes_ + bytes.size()) / word_bytes;
    check_length(completing);

    std::size_t pos = 0;
    while (partial_bytes_ != 0 && pos < bytes.size()) {
      partial_ |= static_cast<word>(static_cast<word>(bytes[pos++]) << (8 * partial_bytes_));
      if (++partial_bytes_ == word_bytes) {
        absorb(partial_);
        ++total_words_;
        partial_ = 0;
        partial_bytes_ = 0;
      }
    }
    while (bytes.size() - pos >= word_bytes) {
      const std::size_t n = std::min((bytes.size() - pos) / word_bytes, P::m - bottom_len_);
      load_words(bytes.subspan(pos, n * word_bytes), bottom_.data() + bottom_len_);
      pos += n * word_bytes;
      bottom_len_ += n;
      total_words_ += n;
      if (bottom_len_ == P::m) flush_bottom();
    }
    while (pos < bytes.size()) {
      partial_ |= static_cast<word>(static_cast<word>(bytes[pos++]) << (8 * partial_bytes_));
      ++partial_bytes_;
    }
  }

  void update(std::string_view s)
    requires(P::bits % 8 == 0)
  {
    update(std::as_bytes(std::span(s.data(), s.size())));
  }

  /// Appends whole characters in [0, 2^n). Not allowed while a partial
  /// word from update() is pending.
  void update_words(std::span<const word> words) {
    check_open();
    if (partial_bytes_ != 0)
      throw error(errc::invalid_state, "word input while a partial byte word is pending");
    check_length(words.size());
    for (word w : words) {
      PMPLUS_CONTRACT(w <= P::mask);
      absorb(w);
      ++total_words_;
    }
  }

  /// Appends the marker, flushes the tree and returns its root in [0, p).
  element finalize_tree() {
    check_open();
    finalized_ = true;
    if (partial_bytes_ != 0) {
      absorb(static_cast<word>(partial_ | static_cast<word>(word{1} << (8 * partial_bytes_))));
      partial_ = 0;
      partial_bytes_ = 0;
    } else {
      absorb(word{1});
    }
    return flush();
  }

  /// Root reduced mod 2^n, then mixed.
  word finalize()
    requires production_params<P>
  {
    // root < p, and when root >= 2^n its low word is already root mod 2^n.
    return mix<word>(finalize_tree().lo);
  }

  /// Back to the empty state, keeping the schedule.
  void reset() {
    bottom_len_ = 0;
    upper_len_.fill(0);
    top_.reset();
    block_count_.fill(0);
    partial_ = 0;
    partial_bytes_ = 0;
    total_words_ = 0;
    finalized_ = false;
  }

  bool finalized() const { return finalized_; }
  /// Complete input words consumed so far (excluding the marker).
  std::uint64_t words_consumed() const { return total_words_; }
  /// Number of block hashes evaluated with the keys of level j (0-based).
  std::uint64_t blocks_hashed(std::size_t level) const { return block_count_.at(level); }

private:
  static constexpr std::size_t upper_levels = P::levels - 1;

  void check_open() const {
    if (finalized_) throw error(errc::already_finalized, "hasher already finalized");
  }

  void check_length(std::uint64_t extra_words) const {
    if (extra_words > max_words - total_words_)
      throw error(errc::length_exceeded, "input longer than m^L - 1 words");
  }

  static void load_words(std::span<const std::byte> src, word* dst) {
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(dst, src.data(), src.size());
    } else {
      for (std::size_t i = 0; i < src.size() / word_bytes; ++i) {
        word w = 0;
        for (std::size_t b = 0; b < word_bytes; ++b)
          w |= static_cast<word>(static_cast<word>(src[i * word_bytes + b]) << (8 * b));
        dst[i] = w;
      }
    }
  }

  void absorb(word w) {
    bottom_[bottom_len_++] = w;
    if (bottom_len_ == P::m) flush_bottom();
  }

  void flush_bottom() {
    ++block_count_[0];
    const auto e = hash_block_words<P>(schedule_->levels[0],
                                       std::span<const word>(bottom_.data(), bottom_len_));
    bottom_len_ = 0;
    push(0, e);
  }

  // Stores the output of the level-(j+1) block function.
  void push(std::size_t j, element e) {
    if (j == upper_levels) {
      top_ = e;
      return;
    }
    upper_[j][upper_len_[j]++] = e;
    if (upper_len_[j] == P::m) flush_upper(j);
  }

  void flush_upper(std::size_t j) {
    ++block_count_[j + 1];
    const auto e = hash_block_elems<P>(schedule_->levels[j + 1],
                                       std::span<const element>(upper_[j].data(), upper_len_[j]));
    upper_len_[j] = 0;
    push(j + 1, e);
  }

  bool empty_from(std::size_t j) const {
    for (std::size_t i = j; i < upper_levels; ++i)
      if (upper_len_[i] != 0) return false;
    return !top_.has_value();
  }

  element flush() {
    // The level-1 keys are always applied, even to a lone marker word, so
    // strings shorter than one word are still keyed.
    if (bottom_len_ != 0) flush_bottom();
    for (std::size_t j = 0; j < upper_levels; ++j) {
      if (upper_len_[j] == 0) continue;
      if (upper_len_[j] == 1 && empty_from(j + 1)) return upper_[j][0];
      flush_upper(j);
    }
    return *top_;
  }

  const key_schedule<P>* schedule_;
  std::array<word, P::m> bottom_;
  std::size_t bottom_len_ = 0;
  std::array<std::array<element, P::m>, upper_levels> upper_;
  std::array<std::size_t, upper_levels> upper_len_{};
  std::optional<element> top_;
  std::array<std::uint64_t, P::levels> block_count_{};
  word partial_ = 0;
  std::size_t partial_bytes_ = 0;
  std::uint64_t total_words_ = 0;
  bool finalized_ = false;
};

template <class P>
  requires production_params<P>
typename P::word hash_oneshot(const key_schedule<P>& schedule, std::span<const std::byte> bytes) {
  tree_hasher<P> h(schedule);
  h.update(bytes);
  return h.finalize();
}

/// Lowercase fixed-width hex, most significant digit first.
template <class W>
std::string to_hex(W digest) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(sizeof(W) * 2, '0');
  for (std::size_t i = out.size(); i-- > 0; digest = static_cast<W>(digest >> 4))
    out[i] = digits[digest & 0xf];
  return out;
}

} // namespace pmplus
