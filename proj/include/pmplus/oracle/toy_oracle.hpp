#pragma once

// Literal arbitrary-precision model of the block hash and the tree
// construction, over any prime p = 2^n + k. Deliberately shares no code
// with the word-level implementation; it is the reference the fast path is
// checked against and the engine for exhaustive property sweeps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "../error.hpp"

namespace pmplus::oracle {

using bigint = boost::multiprecision::cpp_int;

struct toy_params {
  unsigned n = 0;
  std::uint32_t k = 0;
  std::uint32_t kappa = 0;
  std::size_t m = 0;
  std::size_t levels = 0;

  bigint two_n() const { return bigint(1) << n; }
  bigint p() const { return two_n() + k; }
  /// Multipliers range over [1, p - kappa).
  bigint key_count() const { return p() - kappa - 1; }
  bigint max_sigma() const { return boost::multiprecision::pow(bigint(m), static_cast<unsigned>(levels)); }

  /// (p - kappa - 1)(p - 1) < 2^{2n}, m >= 2, L >= 1, p in the known-prime list.
  bool valid() const {
    if (m < 2 || levels < 1 || kappa < k) return false;
    const bool prime = (n == 4 && k == 1) || (n == 8 && k == 1) || (n == 16 && k == 1) ||
                       (n == 32 && k == 15) || (n == 64 && k == 13);
    return prime && (p() - kappa - 1) * (p() - 1) < (bigint(1) << (2 * n));
  }
};

inline toy_params toy17() { return {4, 1, 2, 2, 3}; }
inline toy_params toy257() { return {8, 1, 2, 4, 3}; }
inline toy_params production32() { return {32, 15, 28, 128, 8}; }
inline toy_params production64() { return {64, 13, 24, 128, 8}; }

struct block_key {
  std::vector<bigint> a;
  bigint b;
};

using schedule = std::vector<block_key>;

/// Converts any schedule type exposing levels[j].a[i] and levels[j].b.
template <class Schedule>
schedule from_schedule(const Schedule& ks) {
  schedule out;
  for (const auto& level : ks.levels) {
    block_key bk;
    for (auto a : level.a) bk.a.emplace_back(a);
    bk.b = bigint(level.b);
    out.push_back(std::move(bk));
  }
  return out;
}

/// (b + sum a_i s_i) mod p over exactly m inputs.
inline bigint oracle_block(const toy_params& tp, const block_key& key, std::span<const bigint> s) {
  if (s.size() != tp.m || key.a.size() != tp.m)
    throw std::invalid_argument("oracle_block: block must have exactly m components");
  bigint sum = key.b;
  for (std::size_t i = 0; i < tp.m; ++i) sum += key.a[i] * s[i];
  return sum % tp.p();
}

/// Tree construction on an already-terminated string sigma: zero-pad to a
/// multiple of m, map each block through f_j, increment j, until one value
/// remains. At least one pass is made, so a one-character sigma (the empty
/// string, or fewer bytes than a word) still goes through f_1.
inline bigint oracle_tree_sigma(const toy_params& tp, const schedule& keys, std::vector<bigint> sigma) {
  if (sigma.empty()) throw std::invalid_argument("oracle_tree_sigma: empty sigma");
  if (bigint(sigma.size()) > tp.max_sigma())
    throw error(errc::length_exceeded, "oracle: string longer than m^L - 1");
  std::size_t j = 0;
  do {
    while (sigma.size() % tp.m != 0) sigma.emplace_back(0);
    std::vector<bigint> next;
    for (std::size_t at = 0; at < sigma.size(); at += tp.m)
      next.push_back(oracle_block(tp, keys.at(j), std::span<const bigint>(sigma).subspan(at, tp.m)));
    sigma = std::move(next);
    ++j;
  } while (sigma.size() > 1);
  return sigma.front();
}

/// Appends the value 1 to s and hashes the result.
inline bigint oracle_tree(const toy_params& tp, const schedule& keys, std::vector<bigint> s) {
  s.emplace_back(1);
  return oracle_tree_sigma(tp, keys, std::move(s));
}

/// Byte string to terminated character string: bytes, then 0x01, zero-filled
/// to a word boundary; a byte length that is a multiple of the word size gets
/// a whole extra word equal to 1. Words are little-endian.
inline std::vector<bigint> marked_sigma(std::span<const std::byte> bytes, unsigned n) {
  const std::size_t wb = n / 8;
  std::vector<std::byte> padded(bytes.begin(), bytes.end());
  padded.push_back(std::byte{1});
  while (padded.size() % wb != 0) padded.push_back(std::byte{0});
  std::vector<bigint> sigma;
  for (std::size_t at = 0; at < padded.size(); at += wb) {
    bigint w = 0;
    for (std::size_t b = wb; b-- > 0;) w = (w << 8) | std::to_integer<unsigned>(padded[at + b]);
    sigma.push_back(w);
  }
  return sigma;
}

/// xorshift-multiply-xorshift on n-bit integers, n in {32, 64}.
inline bigint oracle_mix(unsigned n, bigint z) {
  const bigint mod = bigint(1) << n;
  const unsigned s1 = n == 64 ? 33 : 13;
  const unsigned s2 = n == 64 ? 33 : 16;
  const bigint mul = n == 64 ? bigint("0xc4ceb9fe1a85ec53") : bigint("0xab3be54f");
  z ^= z >> s1;
  z = (z * mul) % mod;
  z ^= z >> s2;
  return z;
}

/// Full digest: tree root, mod 2^n, mixed.
inline bigint oracle_digest(const toy_params& tp, const schedule& keys, std::span<const std::byte> bytes) {
  const bigint root = oracle_tree_sigma(tp, keys, marked_sigma(bytes, tp.n));
  return oracle_mix(tp.n, root % tp.two_n());
}

struct regularity_verdict {
  bool permutation = false;
  /// Preimage count of each output in [0, p).
  std::vector<std::size_t> histogram;
};

/// Sweeps component i over [0, p) with the others fixed.
inline regularity_verdict check_component_regularity(const toy_params& tp, const block_key& key,
                                                     std::size_t i, std::vector<bigint> fixed) {
  const auto p = static_cast<std::size_t>(tp.p());
  regularity_verdict v;
  v.histogram.assign(p, 0);
  for (std::size_t x = 0; x < p; ++x) {
    fixed.at(i) = x;
    ++v.histogram[static_cast<std::size_t>(oracle_block(tp, key, fixed))];
  }
  v.permutation = true;
  for (auto c : v.histogram) v.permutation = v.permutation && c == 1;
  return v;
}

/// Same sweep with the output reduced mod M; returns counts over [0, M).
inline std::vector<std::size_t> component_histogram_mod(const toy_params& tp, const block_key& key,
                                                        std::size_t i, std::vector<bigint> fixed,
                                                        std::size_t modulus) {
  const auto p = static_cast<std::size_t>(tp.p());
  std::vector<std::size_t> hist(modulus, 0);
  for (std::size_t x = 0; x < p; ++x) {
    fixed.at(i) = x;
    ++hist[static_cast<std::size_t>(oracle_block(tp, key, fixed) % modulus)];
  }
  return hist;
}

struct key_count {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double rate() const { return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0; }
};

namespace detail {

// Visits every key (a_1..a_m in [1, p - kappa), b in [0, 2^n)).
template <class Fn>
void for_each_key(const toy_params& tp, Fn&& fn) {
  const auto amax = static_cast<std::uint64_t>(tp.key_count());
  const auto bmax = static_cast<std::uint64_t>(tp.two_n());
  block_key key{std::vector<bigint>(tp.m, 1), 0};
  std::vector<std::uint64_t> idx(tp.m, 1);
  for (;;) {
    for (std::uint64_t b = 0; b < bmax; ++b) {
      key.b = b;
      fn(key);
    }
    std::size_t d = 0;
    while (d < tp.m && idx[d] == amax) {
      idx[d] = 1;
      key.a[d] = 1;
      ++d;
    }
    if (d == tp.m) return;
    key.a[d] = ++idx[d];
  }
}

inline bigint mod(const bigint& x, const bigint& m) {
  bigint r = x % m;
  return r < 0 ? r + m : r;
}

} // namespace detail

/// Exhaustive count of keys with f(s) - f(s') = c (mod p).
inline key_count check_delta_universality(const toy_params& tp, const std::vector<bigint>& s,
                                          const std::vector<bigint>& s2, const bigint& c) {
  key_count kc;
  const bigint p = tp.p();
  detail::for_each_key(tp, [&](const block_key& key) {
    ++kc.total;
    if (detail::mod(oracle_block(tp, key, s) - oracle_block(tp, key, s2) - c, p) == 0) ++kc.hits;
  });
  return kc;
}

/// Exhaustive count of keys with (f(s) mod M) - (f(s') mod M) = c (mod M).
inline key_count check_delta_universality_mod(const toy_params& tp, const std::vector<bigint>& s,
                                              const std::vector<bigint>& s2, const bigint& c,
                                              std::uint64_t modulus) {
  key_count kc;
  const bigint m(modulus);
  detail::for_each_key(tp, [&](const block_key& key) {
    ++kc.total;
    const bigint h1 = oracle_block(tp, key, s) % m;
    const bigint h2 = oracle_block(tp, key, s2) % m;
    if (detail::mod(h1 - h2 - c, m) == 0) ++kc.hits;
  });
  return kc;
}

struct uniformity_count {
  /// Offsets b in [0, p) with f(s) = y.
  std::uint64_t solutions_in_p = 0;
  /// Offsets b in [0, 2^n) with f(s) = y.
  std::uint64_t solutions_in_2n = 0;
};

/// For fixed multipliers and input, counts the offsets mapping s to y.
inline uniformity_count check_uniformity(const toy_params& tp, const std::vector<bigint>& a,
                                         const std::vector<bigint>& s, const bigint& y) {
  uniformity_count u;
  const auto p = static_cast<std::uint64_t>(tp.p());
  const auto two_n = static_cast<std::uint64_t>(tp.two_n());
  block_key key{a, 0};
  for (std::uint64_t b = 0; b < p; ++b) {
    key.b = b;
    if (oracle_block(tp, key, s) == y) {
      ++u.solutions_in_p;
      if (b < two_n) ++u.solutions_in_2n;
    }
  }
  return u;
}

} // namespace pmplus::oracle
