#pragma once

// Statistical and structural checks: avalanche, reduction fuzzing against a
// big-integer model, mix round trips, Monte Carlo collision rates and the
// image size of plain n x n-bit multiplication.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"
#include "keygen.hpp"
#include "oracle/toy_oracle.hpp"
#include "tree_hasher.hpp"

namespace pmplus::quality {

namespace detail {

// Seed for shard `index` of a run started from `seed`.
inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Runs fn(shard) for shards [0, count) on up to `threads` workers.
template <class Fn>
void run_shards(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t s = 0; s < count; ++s) fn(s);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t s = t; s < count; s += threads) fn(s);
    });
  for (auto& th : pool) th.join();
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace detail

// ---------------------------------------------------------------------------
// Avalanche

struct avalanche_report {
  std::size_t input_length = 0;
  std::uint64_t trials = 0;
  unsigned output_bits = 0;
  std::uint64_t seed = 0;
  /// flips[in_bit * output_bits + out_bit]
  std::vector<std::uint64_t> flips;

  double frequency(std::size_t in_bit, unsigned out_bit) const {
    return static_cast<double>(flips[in_bit * output_bits + out_bit]) / static_cast<double>(trials);
  }

  double worst_bias() const {
    double worst = 0;
    for (auto f : flips)
      worst = std::max(worst, std::abs(static_cast<double>(f) / static_cast<double>(trials) - 0.5));
    return worst;
  }
};

struct avalanche_options {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  /// Skip the mixing finalizer (negative control).
  bool apply_mix = true;
  unsigned threads = detail::default_threads();
};

/// For each trial, hashes a random input and every single-bit flip of it,
/// counting how often each output bit changes. One report per length.
template <class P>
  requires production_params<P>
std::vector<avalanche_report> avalanche_test(const key_schedule<P>& ks,
                                             std::span<const std::size_t> lengths,
                                             const avalanche_options& opt = {}) {
  using word = typename P::word;
  constexpr std::uint64_t kShardTrials = 4096;
  std::vector<avalanche_report> reports;
  for (std::size_t len : lengths) {
    avalanche_report r{len, opt.trials, P::bits, opt.seed, {}};
    const std::size_t in_bits = 8 * len;
    r.flips.assign(in_bits * P::bits, 0);
    if (len == 0 || opt.trials == 0) {
      reports.push_back(std::move(r));
      continue;
    }
    const std::size_t shards = (opt.trials + kShardTrials - 1) / kShardTrials;
    std::vector<std::vector<std::uint64_t>> partial(shards);
    detail::run_shards(shards, opt.threads, [&](std::size_t shard) {
      std::mt19937_64 gen(detail::shard_seed(opt.seed, (len << 32) ^ shard));
      std::vector<std::uint64_t> flips(in_bits * P::bits, 0);
      std::vector<std::byte> buf(len);
      tree_hasher<P> h(ks);
      auto digest = [&] {
        h.reset();
        h.update(buf);
        return opt.apply_mix ? h.finalize() : h.finalize_tree().lo;
      };
      const std::uint64_t begin = shard * kShardTrials;
      const std::uint64_t end = std::min(opt.trials, begin + kShardTrials);
      for (std::uint64_t t = begin; t < end; ++t) {
        for (auto& b : buf) b = static_cast<std::byte>(gen());
        const word base = digest();
        for (std::size_t bit = 0; bit < in_bits; ++bit) {
          buf[bit / 8] ^= static_cast<std::byte>(1u << (bit % 8));
          word diff = static_cast<word>(base ^ digest());
          buf[bit / 8] ^= static_cast<std::byte>(1u << (bit % 8));
          auto* row = &flips[bit * P::bits];
          while (diff) {
            row[std::countr_zero(diff)]++;
            diff &= static_cast<word>(diff - 1);
          }
        }
      }
      partial[shard] = std::move(flips);
    });
    for (const auto& p : partial)
      for (std::size_t i = 0; i < p.size(); ++i) r.flips[i] += p[i];
    reports.push_back(std::move(r));
  }
  return reports;
}

inline void write_summary(std::ostream& os, const avalanche_report& r) {
  os << "avalanche.length=" << r.input_length << " trials=" << r.trials
     << " output_bits=" << r.output_bits << " seed=" << r.seed
     << " worst_bias=" << r.worst_bias() << '\n';
}

inline void write_csv(std::ostream& os, const avalanche_report& r) {
  os << "input_bit,output_bit,frequency\n";
  for (std::size_t i = 0; i < 8 * r.input_length; ++i)
    for (unsigned j = 0; j < r.output_bits; ++j) os << i << ',' << j << ',' << r.frequency(i, j) << '\n';
}

// ---------------------------------------------------------------------------
// Reduction fuzzing

struct reduction_verdict {
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  unsigned max_v1 = 0;
  std::uint64_t seed = 0;
  /// Operands of the first mismatch, if any.
  std::string first_mismatch;

  bool passed() const { return mismatches == 0 && max_v1 <= 2; }
};

namespace detail {

template <class P>
bool check_reduction(const triple_accumulator<P>& acc, reduction_verdict& v) {
  using oracle::bigint;
  const auto pair = reduce3_to_2<P>(acc);
  const auto z = reduce2_final<P>(pair);
  v.max_v1 = std::max<unsigned>(v.max_v1, pair.v1);
  ++v.cases;
  const bigint p = (bigint(1) << P::bits) + P::k;
  const bigint value = bigint(acc.w0) + (bigint(acc.w1) << P::bits) + (bigint(acc.w2) << (2 * P::bits));
  const bigint got = bigint(z.lo) + (bigint(z.hi) << P::bits);
  if (got == value % p && z.valid()) return true;
  if (v.mismatches++ == 0) {
    std::ostringstream os;
    os << "w0=" << +acc.w0 << " w1=" << +acc.w1 << " w2=" << +acc.w2 << " got=" << got
       << " expected=" << value % p;
    v.first_mismatch = os.str();
  }
  return false;
}

} // namespace detail

/// Random accumulators with w2 <= m, checked against big-integer mod p.
/// One case in eight takes each word from a set of edge values.
template <class P>
reduction_verdict reduction_fuzz(std::uint64_t iterations, std::uint64_t seed) {
  using word = typename P::word;
  reduction_verdict v;
  v.seed = seed;
  std::mt19937_64 gen(seed);
  const word edges[] = {0, 1, static_cast<word>(P::k - 1), static_cast<word>(P::k),
                        static_cast<word>(2 * P::k - 1), static_cast<word>(2 * P::k),
                        static_cast<word>(P::mask - 1), P::mask};
  auto pick = [&](word random) {
    return (gen() & 7) == 0 ? edges[gen() % std::size(edges)] : random;
  };
  for (std::uint64_t i = 0; i < iterations; ++i) {
    triple_accumulator<P> acc;
    acc.w0 = pick(static_cast<word>(gen() & P::mask));
    acc.w1 = pick(static_cast<word>(gen() & P::mask));
    acc.w2 = (gen() & 7) == 0 ? static_cast<word>(P::m) : static_cast<word>(gen() % (P::m + 1));
    detail::check_reduction<P>(acc, v);
  }
  return v;
}

/// Fixed boundary cases.
template <class P>
reduction_verdict reduction_boundaries() {
  using word = typename P::word;
  constexpr word k = static_cast<word>(P::k);
  reduction_verdict v;
  const triple_accumulator<P> cases[] = {
      {P::mask, P::mask, static_cast<word>(P::m)},
      {0, 0, 0},
      {0, 1, 0},
      {static_cast<word>(k - 1), 0, 0},
      {static_cast<word>(2 * k - 1), 2, 0},
      {k, 1, 0},
      {static_cast<word>(k - 1), 1, 0},
      {P::mask, 0, 0},
      {0, 0, static_cast<word>(P::m)},
      {0, P::mask, 0},
  };
  for (const auto& acc : cases) detail::check_reduction<P>(acc, v);
  return v;
}

/// Every accumulator with w2 <= m. Only sensible for toy widths.
template <class P>
reduction_verdict reduction_exhaustive() {
  using word = typename P::word;
  static_assert(P::bits <= 8, "exhaustive reduction only for toy widths");
  reduction_verdict v;
  for (std::uint32_t w2 = 0; w2 <= P::m; ++w2)
    for (std::uint32_t w1 = 0; w1 <= P::mask; ++w1)
      for (std::uint32_t w0 = 0; w0 <= P::mask; ++w0)
        detail::check_reduction<P>({static_cast<word>(w0), static_cast<word>(w1), static_cast<word>(w2)}, v);
  return v;
}

// ---------------------------------------------------------------------------
// Mix round trip

struct roundtrip_verdict {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::uint64_t seed = 0;
  bool passed() const { return failures == 0; }
};

/// unmix(mix(z)) = z and mix(unmix(z)) = z on random z, plus z = 0.
template <class W>
roundtrip_verdict mix_roundtrip(std::uint64_t iterations, std::uint64_t seed) {
  roundtrip_verdict v;
  v.seed = seed;
  std::mt19937_64 gen(seed);
  auto check = [&](W z) {
    ++v.cases;
    if (unmix(mix(z)) != z || mix(unmix(z)) != z) ++v.failures;
  };
  check(0);
  if (mix<W>(0) != 0) ++v.failures;
  for (std::uint64_t i = 0; i < iterations; ++i) check(static_cast<W>(gen()));
  return v;
}

/// Every 32-bit value.
inline roundtrip_verdict mix_roundtrip_exhaustive32() {
  roundtrip_verdict v;
  std::uint32_t z = 0;
  do {
    ++v.cases;
    if (unmix(mix(z)) != z) ++v.failures;
  } while (++z != 0);
  return v;
}

// ---------------------------------------------------------------------------
// Collision Monte Carlo

struct collision_estimate {
  std::uint64_t schedules = 0;
  std::uint64_t collisions = 0;
  std::uint64_t seed = 0;
  double rate() const {
    return schedules ? static_cast<double>(collisions) / static_cast<double>(schedules) : 0.0;
  }
};

/// Fraction of random schedules under which the two inputs collide.
template <class P>
  requires production_params<P>
collision_estimate collision_monte_carlo(std::uint64_t schedule_count, std::span<const std::byte> a,
                                         std::span<const std::byte> b, std::uint64_t seed) {
  collision_estimate est{schedule_count, 0, seed};
  std::mt19937_64 gen(seed);
  for (std::uint64_t i = 0; i < schedule_count; ++i) {
    const auto ks = generate_schedule<P>(gen);
    if (hash_oneshot<P>(ks, a) == hash_oneshot<P>(ks, b)) ++est.collisions;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Image of n x n-bit multiplication

struct image_fraction_point {
  unsigned n = 0;
  std::uint64_t image_size = 0;
  double fraction = 0;
};

inline constexpr unsigned kImageFractionMaxBits = 14;

/// Exact |{x y : x, y in [0, 2^n)}| / 2^{2n}, by marking every product.
inline image_fraction_point nh_image_fraction(unsigned n, unsigned max_bits = kImageFractionMaxBits) {
  if (n < 1 || n > max_bits)
    throw error(errc::out_of_range, "image fraction needs 1 <= n <= " + std::to_string(max_bits));
  const std::uint64_t side = std::uint64_t{1} << n;
  std::vector<std::uint64_t> seen(((side * side) + 63) / 64, 0);
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < side; ++x)
    for (std::uint64_t y = x; y < side; ++y) {
      const std::uint64_t prod = x * y;
      auto& w = seen[prod / 64];
      const std::uint64_t bit = std::uint64_t{1} << (prod % 64);
      if (!(w & bit)) {
        w |= bit;
        ++count;
      }
    }
  return {n, count, static_cast<double>(count) / static_cast<double>(side * side)};
}

/// Independent count of the same image: materialize every product, sort,
/// count distinct values.
inline std::uint64_t nh_image_size_bruteforce(unsigned n) {
  const std::uint64_t side = std::uint64_t{1} << n;
  std::vector<std::uint32_t> prods;
  prods.reserve(side * side);
  for (std::uint64_t x = 0; x < side; ++x)
    for (std::uint64_t y = 0; y < side; ++y) prods.push_back(static_cast<std::uint32_t>(x * y));
  std::sort(prods.begin(), prods.end());
  return static_cast<std::uint64_t>(std::unique(prods.begin(), prods.end()) - prods.begin());
}

inline void write_csv(std::ostream& os, std::span<const image_fraction_point> pts) {
  os << "n,image_size,fraction\n";
  for (const auto& p : pts) os << p.n << ',' << p.image_size << ',' << p.fraction << '\n';
}

} // namespace pmplus::quality
